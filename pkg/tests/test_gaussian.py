import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import class_key, gcd_bruteforce
from so3zi.errors import DomainError
from so3zi.gaussian import (
    INV_SQRT2,
    OMEGA8,
    OMEGA8_INV,
    ONE_PLUS_I,
    SQRT2,
    CycloNum,
    GaussianInt,
    ext_ggcd,
    format_gaussian,
    ggcd,
    omega_reps,
    parse_gaussian,
    reduce_mod,
    standard_associate,
    unit,
)

G = GaussianInt
ints = st.integers(-60, 60)
gauss = st.builds(G, ints, ints)
nonzero = gauss.filter(bool)
# every nonzero modulus of norm <= 400 lies in this box
small_modulus = st.builds(G, st.integers(-20, 20), st.integers(-20, 20)).filter(
    lambda z: z and z.norm() <= 400)
cyclo = st.builds(CycloNum, gauss, gauss, st.integers(0, 4))


class TestLiterals:
    @pytest.mark.parametrize("text,z", [
        ("0", G(0, 0)), ("i", G(0, 1)), ("-i", G(0, -1)), ("3-2i", G(3, -2)),
        ("2i", G(0, 2)), ("-7", G(-7, 0)), ("1+i", G(1, 1)), (" -4+15i ", G(-4, 15)),
    ])
    def test_parse(self, text, z):
        assert parse_gaussian(text) == z

    @pytest.mark.parametrize("bad", ["", "1+", "i2", "1.5", "2+3j", "++1"])
    def test_parse_rejects(self, bad):
        with pytest.raises(ValueError):
            parse_gaussian(bad)

    @given(gauss)
    def test_round_trip(self, z):
        assert parse_gaussian(format_gaussian(z)) == z


class TestStandardAssociate:
    def test_examples(self):
        assert standard_associate(G(1, 1)) == (0, G(1, 1))
        assert standard_associate(G(1, -1)) == (1, G(1, 1))
        assert standard_associate(2) == (0, G(2, 0))
        assert unit(3) * G(1, 1) ** 2 == 2

    def test_zero(self):
        with pytest.raises(DomainError, match="no standard associate of zero"):
            standard_associate(0)

    @given(nonzero)
    def test_unique_standard_associate(self, z):
        j, s = standard_associate(z)
        assert s == unit(j) * z and s.is_standard()
        assert sum((unit(k) * z).is_standard() for k in range(4)) == 1


class TestGcd:
    def test_examples(self):
        assert ggcd(0, G(3, 1)) == G(3, 1)
        assert ggcd(2, G(1, 1)) == G(1, 1)
        assert ggcd(5, G(3, 1)) == G(1, 2)
        assert ggcd(0, 0) == 0

    @pytest.mark.parametrize("x,y", [(G(1), G(0)), (G(2), G(1, 1)), (G(5), G(3, 1))])
    def test_ext_examples(self, x, y):
        g, z, w = ext_ggcd(x, y)
        assert g == ggcd(x, y) and x * z - y * w == g

    def test_ext_zero(self):
        with pytest.raises(DomainError):
            ext_ggcd(0, 0)

    @given(st.builds(G, st.integers(-12, 12), st.integers(-12, 12)),
           st.builds(G, st.integers(-12, 12), st.integers(-12, 12)))
    @settings(max_examples=150)
    def test_matches_bruteforce(self, x, y):
        assert ggcd(x, y) == G(*gcd_bruteforce((x.re, x.im), (y.re, y.im)))

    @given(gauss, gauss)
    def test_ext_certificate(self, x, y):
        if not (x or y):
            return
        g, z, w = ext_ggcd(x, y)
        assert x * z - y * w == g
        assert g.divides(x) and g.divides(y) and g.is_standard()


class TestResidues:
    def test_examples(self):
        assert set(omega_reps(G(1, 1)).reps) == {G(0), G(1)}
        assert set(omega_reps(2).reps) == {G(0), G(1), G(0, 1), G(1, 1)}
        assert set(omega_reps(G(2, 2)).reps) == {G(r, s) for r in range(4) for s in range(2)}
        assert reduce_mod(0, G(1, 1)) == 0
        assert reduce_mod(-1, G(1, 1)) == 1
        assert reduce_mod(G(0, 3), 2) == G(0, 1)

    @pytest.mark.parametrize("n", range(1, 13))
    def test_power_formula(self, n):
        _, y = standard_associate(ONE_PLUS_I ** n)
        h = math.ceil(n / 2)
        expected = {G(r, s) for r in range(2 ** h) for s in range(2 ** (n - h))}
        assert set(omega_reps(y).reps) == expected

    def test_zero_modulus(self):
        with pytest.raises(DomainError):
            omega_reps(0)
        with pytest.raises(DomainError):
            reduce_mod(3, 0)

    @given(small_modulus)
    @settings(max_examples=60)
    def test_general_modulus(self, y):
        reps = omega_reps(y).reps
        assert len(reps) == y.norm()
        key = (y.re, y.im)
        assert len({class_key((r.re, r.im), key) for r in reps}) == len(reps)

    @given(gauss, small_modulus)
    def test_reduce_lands_in_system(self, x, y):
        r = reduce_mod(x, y)
        assert r in omega_reps(y)
        assert y.divides(x - r)
        assert reduce_mod(r, y) == r


class TestCycloNum:
    def test_omega_identities(self):
        assert OMEGA8 * OMEGA8 == CycloNum(G(0, 1))
        assert OMEGA8 ** 4 == CycloNum(-1)
        assert OMEGA8 * OMEGA8_INV == CycloNum(1)
        assert OMEGA8 * G(1, -1) == CycloNum(0, G(1, -1))
        assert INV_SQRT2 * INV_SQRT2 == CycloNum(1).half()
        assert SQRT2 * SQRT2 == CycloNum(2)

    def test_normal_form_is_unique(self):
        assert CycloNum(G(1, 1), 0, 1) == CycloNum(1)
        assert CycloNum(2, 0, 2) == CycloNum(G(0, -1))
        assert CycloNum(4, G(2, 2), 3).k == 0

    def test_gaussian_test(self):
        assert CycloNum(G(2, 3)).is_gaussian_int()
        assert not OMEGA8.is_gaussian_int()
        assert not CycloNum(1).half().is_gaussian_int()

    def test_json(self):
        x = CycloNum(G(1, 2), G(-3, 0), 3)
        assert x.to_json() == {"u": "1+2i", "v": "-3", "k": 3}
        assert CycloNum.from_json(x.to_json()) == x
        assert CycloNum.from_json("1-i") == CycloNum(G(1, -1))

    @given(cyclo, cyclo, cyclo)
    def test_ring_axioms(self, a, b, c):
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a * b == b * a
        assert a + b - b == a

    @given(cyclo, cyclo)
    def test_complex_embedding_is_homomorphism(self, a, b):
        for exact, approx in ((a * b, a.to_complex() * b.to_complex()),
                              (a + b, a.to_complex() + b.to_complex())):
            got = exact.to_complex()
            assert abs(got - approx) <= 1e-12 * max(1.0, abs(approx))

    @given(cyclo)
    def test_conjugate(self, a):
        assert a.conjugate().conjugate() == a
        assert abs(a.conjugate().to_complex() - a.to_complex().conjugate()) <= 1e-9 * max(1, abs(a.to_complex()))
        assert (a * a.conjugate()).is_real()

    @given(cyclo)
    def test_div_one_plus_i(self, a):
        assert a.div_one_plus_i() * ONE_PLUS_I == a

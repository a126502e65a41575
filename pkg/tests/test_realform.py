import math

import numpy as np
import pytest

from oracles import ETA, real_moebius_gen, word_search
from so3zi.errors import DomainError, NonConvergenceError
from so3zi.gaussian import INV_SQRT2, GaussianInt as G
from so3zi.hyperbolic import H3Point, flt_apply, in_F
from so3zi.matrices import Mat2, Mat3
from so3zi.orthogonal import S, T_1, T_1PI, conj3, gamma_membership, is_so3_gaussian
from so3zi.realform import (
    GAMMA_INV_R,
    J,
    RHO,
    T_2,
    W,
    H2Point,
    RealCoset,
    conj_eta,
    flt_real,
    fr_margin,
    gamma_int_membership,
    gamma_int_membership_via_w,
    in_F_union_rho,
    in_FR,
    reduce_gamma_int,
    relation_check,
)
from oracles import conj_numeric

REAL_GENS = (S, T_2, T_2.inverse(), W, W.inverse(), GAMMA_INV_R, T_1, T_1.inverse())


def random_real(rng, n):
    g = Mat2.identity()
    for _ in range(n):
        g = g * rng.choice(REAL_GENS)
    return g


class TestConjEta:
    def test_examples(self):
        assert conj_eta(Mat2.identity()) == Mat3.identity()
        assert conj_eta(Mat2(1, 2, 0, 1)) == Mat3([[-1, 2, -2], [-2, 3, -2], [2, -2, 1]])
        assert conj_eta(W) == Mat3([[0, 0, 1], [0, 1, 0], [-1, 0, 0]])

    def test_numeric_oracle(self, rng):
        for _ in range(30):
            g = random_real(rng, 5)
            got = np.array(conj_eta(g).to_complex())
            ref = conj_numeric(np.array(g.to_complex(), complex).reshape(2, 2), ETA)
            assert np.allclose(got, ref, atol=1e-9)

    def test_preserves_form_and_is_homomorphism(self, rng):
        for _ in range(60):
            g, h = random_real(rng, 4), random_real(rng, 4)
            m = conj_eta(g)
            assert m.preserves(J) and m.det() == 1
            assert conj_eta(g) * conj_eta(h) == conj_eta(g * h)
        assert conj_eta(-W) == conj_eta(W)

    def test_rejects_complex_and_bad_det(self):
        with pytest.raises(DomainError):
            conj_eta(T_1PI)
        with pytest.raises(DomainError):
            conj_eta(Mat2(2, 0, 0, 1))


class TestMembership:
    def test_examples(self):
        assert gamma_int_membership(S) is RealCoset.Identity
        assert gamma_int_membership(W) is RealCoset.W
        assert gamma_int_membership(T_1) is None

    def test_t1_has_half_entry(self):
        assert not conj_eta(T_1).is_gaussian()
        assert any(abs(abs(x) - 0.5) < 1e-12 for row in conj_eta(T_1).to_complex() for x in row)

    def test_inversion_generator(self):
        assert gamma_int_membership(GAMMA_INV_R) is RealCoset.W
        assert GAMMA_INV_R * W.inverse() == S

    def test_index_two(self):
        assert gamma_int_membership(W) is not RealCoset.Identity
        assert W * W == S
        assert gamma_int_membership(W * W) is RealCoset.Identity

    def test_equivalences(self, rng):
        for _ in range(200):
            g = random_real(rng, rng.randint(1, 6))
            tag = gamma_int_membership(g)
            assert tag == gamma_int_membership_via_w(g)
            assert (tag is not None) == conj_eta(g).is_rational_integral()
            if tag is not None:
                assert gamma_membership(g) is not None

    def test_rejects_complex(self):
        with pytest.raises(DomainError):
            gamma_int_membership(T_1PI)


class TestRho:
    def test_shape(self):
        assert RHO == Mat2(G(0, 1), G(0, -2), 0, G(0, -1))
        assert is_so3_gaussian(conj3(RHO))
        assert RHO * RHO == -Mat2.identity()

    def test_boundary_map(self):
        p = flt_apply(RHO, H3Point(0.25, 0.5, 1.0))
        assert math.isclose(p.x1, 1.75) and math.isclose(p.x2, -0.5) and math.isclose(p.y, 1.0)


class TestDomain:
    def test_examples(self):
        assert in_FR(H2Point(0, 1))
        assert not in_FR(H2Point(1, 1))
        assert in_FR(H2Point(1, 2))

    def test_relation_examples(self):
        # the vertex i lies on the rho side, (1.5, 1.5) on the F(G) side
        assert in_F_union_rho(H3Point(0, 0, 1), 1e-9)
        assert not in_F(H3Point(0.0, 0.0, 1.0))
        assert in_F(H3Point(1.5, 0.0, 1.5))

    def test_relation_check(self, rng):
        report = relation_check(300, rng)
        assert report.ok and report.forward == 300 and report.backward == 300


def real_oracle_best_y(z, depth):
    gens = [real_moebius_gen(*(v.real for v in m.to_complex()))
            for m in (T_2, T_2.inverse(), GAMMA_INV_R, GAMMA_INV_R.inverse())]
    return max(p[1] for p in word_search((z.x, z.y), gens, depth))


class TestReduce:
    def test_interior(self):
        r = reduce_gamma_int(H2Point(0.5, 3))
        assert r.gamma == Mat2.identity() and r.word == []

    @pytest.mark.parametrize("z", [H2Point(1, 0.5), H2Point(7.3, 0.4), H2Point(-0.6, 0.3)])
    def test_against_word_search(self, z):
        r = reduce_gamma_int(z)
        assert in_FR(r.point)
        assert gamma_int_membership(r.gamma) is not None
        w = flt_real(r.gamma, z)
        assert abs(w.x - r.point.x) < 1e-9 and abs(w.y - r.point.y) < 1e-9
        assert r.point.y >= real_oracle_best_y(z, 8) - 1e-9

    def test_inversion_used(self):
        r = reduce_gamma_int(H2Point(1, 0.5))
        assert ("gamma_inv_R", 1) in r.word

    def test_orbit_invariance(self, rng):
        checked = 0
        for _ in range(300):
            z = H2Point(rng.uniform(-6, 6), 10 ** rng.uniform(-2, 1))
            g = random_real(rng, rng.randint(1, 8))
            if gamma_int_membership(g) is None:
                continue
            a, b = reduce_gamma_int(z).point, reduce_gamma_int(flt_real(g, z)).point
            if min(fr_margin(a), fr_margin(b)) > 1e-6:
                checked += 1
                assert abs(a.x - b.x) < 1e-6 and abs(a.y - b.y) < 1e-6 * max(1, a.y)
        assert checked > 50

    def test_iteration_cap(self):
        with pytest.raises(NonConvergenceError):
            reduce_gamma_int(H2Point(0.9, 1e-3), max_iter=1)

    def test_bad_point(self):
        with pytest.raises(DomainError):
            H2Point(0, -1)


def test_inv_sqrt2_squared():
    assert INV_SQRT2 * INV_SQRT2 * 2 == 1

import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import flt_quaternion, moebius_gen, picard_max_height, word_search
from so3zi import kernels
from so3zi.errors import DomainError, NonConvergenceError
from so3zi.hyperbolic import (
    H3Point,
    IwasawaCoords,
    default_eps,
    export_domain,
    flt_apply,
    gamma_margin,
    gamma_word_matrix,
    hyperbolic_distance,
    in_F,
    in_F1,
    in_F1_brute,
    in_picard,
    in_triangle_G,
    induced_action,
    iwasawa,
    iwasawa_inv,
    nearest_center,
    picard_margin,
    point_gap,
    reduce_gamma,
    reduce_picard,
)
from so3zi.matrices import Mat2
from so3zi.orthogonal import (
    GAMMA_INV,
    ROT_ABOUT_1,
    S,
    T_1,
    T_1MI,
    T_1PI,
    gamma_membership,
    random_group_element,
    random_sl2_word,
)

coord = st.floats(-20, 20, allow_nan=False)
height = st.floats(1e-3, 50, allow_nan=False)
points = st.builds(H3Point, coord, coord, height)


def close(p, q, tol=1e-12):
    return point_gap(p, q) <= tol


class TestPoint:
    def test_rejects_bad_height(self):
        with pytest.raises(DomainError):
            H3Point(0, 0, 0)
        with pytest.raises(DomainError):
            H3Point(0, float("nan"), 1)

    def test_iwasawa(self):
        t = iwasawa(H3Point(2, 3, 5))
        assert (t.t1, t.t2, t.t3) == (-math.log(5), 2.0, 3.0)
        assert iwasawa_inv(IwasawaCoords(0, 0, 0)) == H3Point(0, 0, 1)

    @given(points)
    def test_iwasawa_round_trip(self, z):
        assert close(iwasawa_inv(iwasawa(z)), z, 1e-12)


class TestAction:
    def test_examples(self):
        j = H3Point(0, 0, 1)
        assert flt_apply(Mat2.identity(), H3Point(0.3, -2, 4)) == H3Point(0.3, -2, 4)
        assert close(flt_apply(S, j), j)
        assert flt_apply(T_1, j) == H3Point(1, 0, 1)

    def test_requires_det_one(self):
        with pytest.raises(DomainError):
            flt_apply(Mat2(2, 0, 0, 1), H3Point(0, 0, 1))

    @given(points, st.integers(0, 10**6))
    @settings(max_examples=100)
    def test_matches_quaternion_oracle(self, z, seed):
        g = random_group_element(random.Random(seed), 5)
        w = flt_apply(g, z)
        x1, x2, y, k = flt_quaternion(*g.to_complex(), z.x1, z.x2, z.y)
        assert abs(k) <= 1e-9
        scale = max(1.0, abs(x1), abs(x2), y)
        assert max(abs(w.x1 - x1), abs(w.x2 - x2), abs(w.y - y)) <= 1e-9 * scale

    @given(points, st.integers(0, 10**6))
    @settings(max_examples=100)
    def test_height_formula(self, z, seed):
        g = random_sl2_word(random.Random(seed), 5)
        _, _, c, d = g.to_complex()
        expected = z.y / (abs(c * z.x + d) ** 2 + abs(c) ** 2 * z.y ** 2)
        assert abs(flt_apply(g, z).y - expected) <= 1e-12 * max(1.0, expected)

    @given(points, points, st.integers(0, 10**6))
    @settings(max_examples=100)
    def test_isometry(self, z, w, seed):
        g = random_group_element(random.Random(seed), 4)
        d0 = hyperbolic_distance(z, w)
        d1 = hyperbolic_distance(flt_apply(g, z), flt_apply(g, w))
        assert abs(d0 - d1) <= 1e-9 * max(1.0, d0)


class TestDomains:
    def test_picard(self):
        assert in_picard(H3Point(0, 0, 1))
        assert in_picard(H3Point(0.4, 0.3, 1))
        assert not in_picard(H3Point(0.6, 0, 2))
        assert not in_picard(H3Point(0.1, -0.01, 2))
        assert not in_picard(H3Point(0.1, 0.1, 0.9))

    def test_f1(self):
        assert in_F1(H3Point(1, 0, math.sqrt(2)))
        assert not in_F1(H3Point(1, 0, 1))
        assert in_F1(H3Point(0, 0, 2))

    def test_nearest_center(self):
        assert nearest_center(1.1, 0.2) == 1
        assert nearest_center(2.1, 1.2) == complex(2, 1)
        assert nearest_center(-0.8, -1.1) == complex(0, -1)
        assert nearest_center(0.1, 0.9) == complex(0, 1)

    def test_triangle(self):
        for v in ((1, 0), (2, 0), (1, 1), (4 / 3, 1 / 3)):
            assert in_triangle_G(*v)
        assert not in_triangle_G(0.99, 0.5)
        assert not in_triangle_G(1.6, 0.6)
        assert in_F(H3Point(1.2, 0.3, 2.0))
        assert not in_F(H3Point(1.2, 0.3, 1.0))

    def test_f1_against_brute_force(self, rng):
        for _ in range(300):
            z = H3Point(rng.uniform(-4, 4), rng.uniform(-4, 4), rng.uniform(0.01, 1.6))
            assert in_F1(z) == in_F1_brute(z)

    def test_eps_from_environment(self, monkeypatch):
        z = H3Point(1.0, 0.0, math.sqrt(2) - 1e-5)
        assert not in_F1(z)
        monkeypatch.setenv("FORD_EPS", "1e-3")
        assert default_eps() == 1e-3
        assert in_F1(z)
        monkeypatch.setenv("FORD_EPS", "nope")
        with pytest.raises(DomainError):
            default_eps()


class TestInducedAction:
    def test_examples(self):
        assert induced_action(T_1PI, (0.0, 0.0)) == (1.0, 1.0)
        p = induced_action(ROT_ABOUT_1, (1.0, 0.0))
        assert math.isclose(p[0], 1.0) and abs(p[1]) < 1e-12
        p = induced_action(ROT_ABOUT_1, (2.0, 0.0))
        assert math.isclose(p[0], 1.0) and math.isclose(p[1], 1.0)

    def test_matches_lifted_action(self):
        for y in (0.1, 1.0, 30.0):
            w = flt_apply(ROT_ABOUT_1, H3Point(1.7, -0.4, y))
            t = induced_action(ROT_ABOUT_1, (1.7, -0.4))
            assert math.isclose(w.x1, t[0]) and math.isclose(w.x2, t[1]) and math.isclose(w.y, y)

    def test_rejects_non_stabilizer(self):
        with pytest.raises(DomainError):
            induced_action(S, (0.0, 0.0))
        with pytest.raises(DomainError):
            induced_action(T_1, (0.0, 0.0))


GAMMA_GENS = [moebius_gen(*m.to_complex()) for m in
              (T_1PI, T_1PI.inverse(), T_1MI, T_1MI.inverse(), ROT_ABOUT_1,
               ROT_ABOUT_1.inverse(), GAMMA_INV, GAMMA_INV.inverse())]


def gamma_oracle(z, depth):
    found = word_search(z.as_tuple(), GAMMA_GENS, depth)
    best_y = max(p[2] for p in found)
    in_domain = [H3Point(*p) for p in found if in_F(H3Point(*p))]
    return best_y, in_domain


class TestReduceGamma:
    def test_interior_point_is_fixed(self):
        r = reduce_gamma(H3Point(1.2, 0.3, 2.0))
        assert r.gamma == Mat2.identity() and r.word == [] and r.iterations == 1

    @pytest.mark.parametrize("z", [H3Point(0, 0, 1), H3Point(1.0, 0.0, 0.5), H3Point(-0.3, 0.8, 0.6)])
    def test_against_word_search(self, z):
        r = reduce_gamma(z)
        assert in_F(r.point)
        assert close(flt_apply(r.gamma, z), r.point, 1e-9)
        best_y, hits = gamma_oracle(z, 5)
        assert r.point.y >= best_y - 1e-9
        assert any(close(h, r.point, 1e-9) for h in hits)

    def test_inversion_needed(self):
        r = reduce_gamma(H3Point(1.0, 0.0, 0.5))
        assert ("gamma_inv", 1) in r.word
        assert r.point.y >= math.sqrt(2) * (1 - 1e-9)

    def test_witness_is_member(self, rng):
        for _ in range(100):
            z = H3Point(rng.uniform(-9, 9), rng.uniform(-9, 9), 10 ** rng.uniform(-2.5, 1))
            r = reduce_gamma(z)
            assert gamma_membership(r.gamma) is not None
            assert in_F(r.point)
            assert point_gap(flt_apply(r.gamma, z), r.point) < 1e-9

    def test_height_never_decreases(self, rng):
        for _ in range(50):
            z = H3Point(rng.uniform(-5, 5), rng.uniform(-5, 5), 10 ** rng.uniform(-2, 0))
            r = reduce_gamma(z)
            # replay the walk one generator at a time
            _, _, _, ops, _, _ = kernels.walk_gamma(z.x1, z.x2, z.y, 1e-9, 10_000)
            p = z
            for op in ops:
                q = flt_apply(gamma_word_matrix(*op)[0], p)
                assert q.y >= p.y * (1 - 1e-12)
                p = q
            assert close(p, r.point, 1e-9)

    def test_idempotent(self, rng):
        for _ in range(50):
            z = H3Point(rng.uniform(-5, 5), rng.uniform(-5, 5), 10 ** rng.uniform(-2, 0))
            p = reduce_gamma(z).point
            if gamma_margin(p) > 1e-6:
                assert reduce_gamma(p).gamma in (Mat2.identity(), -Mat2.identity())

    def test_orbit_invariance(self, rng):
        for _ in range(100):
            z = H3Point(rng.uniform(-5, 5), rng.uniform(-5, 5), 10 ** rng.uniform(-2, 1))
            g = random_group_element(rng, rng.randint(1, 8))
            a, b = reduce_gamma(z).point, reduce_gamma(flt_apply(g, z)).point
            if min(gamma_margin(a), gamma_margin(b)) > 1e-6:
                assert close(a, b, 1e-6)

    def test_sign_normalized(self, rng):
        for _ in range(30):
            z = H3Point(rng.uniform(-5, 5), rng.uniform(-5, 5), 10 ** rng.uniform(-2, 0))
            a = reduce_gamma(z).gamma.a.to_complex()
            assert a.real > -1e-12

    def test_iteration_cap(self):
        with pytest.raises(NonConvergenceError):
            reduce_gamma(H3Point(0.3, 0.2, 1e-4), max_iter=1)


class TestReducePicard:
    def test_j_is_fixed(self):
        r = reduce_picard(H3Point(0, 0, 1))
        assert r.gamma == Mat2.identity()

    @pytest.mark.parametrize("z", [H3Point(0.7, 0.2, 0.8), H3Point(0.1, 0.3, 0.15), H3Point(-0.4, 0.2, 0.3)])
    def test_reaches_highest_point_of_orbit(self, z):
        r = reduce_picard(z)
        assert in_picard(r.point)
        assert math.isclose(r.point.y, picard_max_height(z.x1, z.x2, z.y), rel_tol=1e-9)

    def test_far_point(self):
        z = H3Point(5.3, -2.2, 0.1)
        r = reduce_picard(z)
        assert in_picard(r.point)
        assert sum(abs(e) for tag, e in r.word if tag in ("T_1", "T_i")) >= 5
        assert close(flt_apply(r.gamma, z), r.point, 1e-9)
        assert r.gamma.is_gaussian() and r.gamma.is_sl2()

    def test_orbit_invariance(self, rng):
        for _ in range(100):
            z = H3Point(rng.uniform(-5, 5), rng.uniform(-5, 5), 10 ** rng.uniform(-2, 1))
            g = random_sl2_word(rng, rng.randint(1, 8))
            a, b = reduce_picard(z).point, reduce_picard(flt_apply(g, z)).point
            if min(picard_margin(a), picard_margin(b)) > 1e-6:
                assert close(a, b, 1e-6)


class TestExport:
    def test_gamma(self):
        doc = export_domain("gamma")
        tags = [v["tag"] for v in doc["vertices"]]
        assert tags == ["1+sqrt2 j", "2+j", "1+i+j", "infinity"]
        assert doc["vertices"][-1] == {"tag": "infinity", "ideal": True}
        for v in doc["vertices"][:-1]:
            z = H3Point(v["x1"], v["x2"], v["y"])
            assert in_F(z) and abs(gamma_margin(z)) < 1e-12
        kinds = [f["kind"] for f in doc["faces"]]
        assert kinds == ["plane", "plane", "plane", "hemisphere"]

    def test_picard(self):
        doc = export_domain("picard")
        assert len(doc["faces"]) == 5
        for v in doc["vertices"][:-1]:
            assert abs(picard_margin(H3Point(v["x1"], v["x2"], v["y"]))) < 1e-12

    def test_gamma_int(self):
        doc = export_domain("gammaInt", [0.5, 1.0, 2.0])
        assert [v["tag"] for v in doc["vertices"]] == ["i", "2+i", "infinity"]
        assert doc["slices"][2]["intervals"] == [[0.0, 2.0]]
        lo, hi = doc["slices"][1]["intervals"]
        assert lo[1] == 0.0 and hi[0] == 2.0

    def test_slices_lie_in_domain(self):
        doc = export_domain("gamma", [0.3, 1.1, 1.5])
        (whole,) = doc["slices"][2]["polylines"]
        assert {tuple(p) for p in whole} == {(1.0, 0.0), (2.0, 0.0), (1.0, 1.0)}
        for s in doc["slices"]:
            for line in s["polylines"]:
                for x1, x2 in line:
                    assert in_F(H3Point(x1, x2, s["y"]), 1e-3)
        assert doc["slices"][0]["polylines"] == []

    def test_unknown(self):
        with pytest.raises(DomainError):
            export_domain("hexagon")
        with pytest.raises(DomainError):
            export_domain("gamma", [-1.0])

"""Property suites run by ``so3zi verify`` and by the acceptance tests.

Random inputs are drawn up front from one seeded ``random.Random`` so results
do not depend on the thread count; only the checking fans out.
"""
from __future__ import annotations

import os
import random
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable

from .gaussian import GaussianInt, ONE_PLUS_I, omega_reps, reduce_mod
from .hecke import alpha_matrix, enumerate_orbit_labels, hecke_decompose, in_xi12, left_equivalent
from .hyperbolic import (
    H3Point,
    flt_apply,
    gamma_margin,
    in_F,
    in_F1,
    in_F1_brute,
    in_picard,
    induced_action,
    picard_margin,
    point_gap,
    reduce_gamma,
    reduce_picard,
)
from .matrices import Mat2
from .orthogonal import (
    COSET_LABELS,
    ROT_ABOUT_1,
    S,
    T_1,
    T_1PI,
    closure_check,
    conj3,
    conj3_closed_form,
    coset_rep,
    gamma_membership,
    gamma_phi1_membership,
    is_so3_gaussian,
    random_group_element,
    random_sl2_word,
)
from .realform import (
    GAMMA_INV_R,
    J,
    RealCoset,
    T_2,
    W,
    H2Point,
    conj_eta,
    flt_real,
    fr_margin,
    gamma_int_membership,
    gamma_int_membership_via_w,
    in_FR,
    reduce_gamma_int,
    relation_check,
)

BOUNDARY_BAND = 1e-6
AGREE_TOL = 1e-6
WITNESS_ERR_TOL = 1e-9
MAX_ITERATIONS_SEEN = 100


@dataclass
class SuiteResult:
    name: str
    checks: int = 0
    failures: list = field(default_factory=list)
    stats: dict = field(default_factory=dict)
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.failures and self.checks > 0

    def fail(self, **info) -> None:
        # keep reports readable when something systematic breaks
        if len(self.failures) < 20:
            self.failures.append(info)
        else:
            self.stats["failures_truncated"] = self.stats.get("failures_truncated", 0) + 1

    def to_json(self) -> dict:
        return {"suite": self.name, "passed": self.passed, "checks": self.checks,
                "failures": self.failures, "stats": self.stats,
                "seconds": round(self.seconds, 3)}


def default_threads() -> int:
    return os.cpu_count() or 1


def _pmap(fn: Callable, items: Iterable, threads: int) -> list:
    items = list(items)
    if threads <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (4 * threads))))


SUITES: dict[str, Callable[..., SuiteResult]] = {}


def suite(name: str):
    def register(fn):
        def run(samples: int, rng: random.Random, eps: float, threads: int = 1) -> SuiteResult:
            res = SuiteResult(name)
            t0 = time.perf_counter()
            fn(res, samples, rng, eps, threads)
            res.seconds = time.perf_counter() - t0
            return res
        run.__name__ = fn.__name__
        run.__doc__ = fn.__doc__
        SUITES[name] = run
        return run
    return register


@suite("homomorphism")
def homomorphism(res, samples, rng, eps, threads):
    """conj3(g) conj3(h) == conj3(gh) exactly on random SL2(Z[i]) pairs."""
    pairs = [(random_sl2_word(rng, rng.randint(1, 8)), random_sl2_word(rng, rng.randint(1, 8)))
             for _ in range(samples)]

    def check(pair):
        g, h = pair
        return conj3(g) * conj3(h) == conj3(g * h)

    for (g, h), ok in zip(pairs, _pmap(check, pairs, threads)):
        res.checks += 1
        if not ok:
            res.fail(g=g.to_json(), h=h.to_json())


@suite("orthogonality")
def orthogonality(res, samples, rng, eps, threads):
    """conj3 lands in SO(3) exactly; the formula with the flipped (3,2) sign does not."""
    mats = [random_sl2_word(rng, rng.randint(1, 8)) for _ in range(samples)]

    def check(g):
        m = conj3(g)
        return m.is_special_orthogonal() and m == conj3_closed_form(g)

    for g, ok in zip(mats, _pmap(check, mats, threads)):
        res.checks += 1
        if not ok:
            res.fail(g=g.to_json())
    res.checks += 1
    if conj3_closed_form(T_1PI, printed_sign=True).is_special_orthogonal():
        res.fail(reason="flipped-sign formula is orthogonal on T_{1+i}")


@suite("cosets")
def cosets(res, samples, rng, eps, threads):
    """Six coset representatives: integrality, distinctness and closure of the union."""
    for lab in COSET_LABELS:
        res.checks += 1
        if not is_so3_gaussian(conj3(coset_rep(lab))):
            res.fail(label=str(lab), reason="conj3(rep) not in SO3(Z[i])")
    for l1 in COSET_LABELS:
        for l2 in COSET_LABELS:
            res.checks += 1
            same = in_xi12(coset_rep(l1) * coset_rep(l2).inverse())
            if same != (l1 == l2):
                res.fail(l1=str(l1), l2=str(l2), reason="coset separation")
    report = closure_check(samples, rng)
    res.checks += report.pairs
    for f in report.failures:
        res.fail(**f)
    res.stats["families"] = {"x".join(k): v for k, v in sorted(report.families.items())}


def _class_key(r: GaussianInt, y: GaussianInt) -> tuple[int, int]:
    # r = r' mod y  iff  (r - r') conj(y) = 0 mod norm(y) componentwise
    n = y.norm()
    t = r * y.conjugate()
    return (t.re % n, t.im % n)


@suite("residues")
def residues(res, samples, rng, eps, threads, max_n: int = 12, box: int = 8):
    """Residue systems of (1+i)^n: size 2^n, pairwise incongruent, and reduce_mod lands in them."""
    for n in range(1, max_n + 1):
        y = ONE_PLUS_I ** n
        reps = omega_reps(y).reps
        res.checks += 1
        if len(reps) != 2 ** n:
            res.fail(n=n, reason=f"{len(reps)} residues")
        keys = {_class_key(r, y) for r in reps}
        res.checks += 1
        if len(keys) != len(reps):
            res.fail(n=n, reason="congruent residues")
        rep_set = set(reps)
        for a in range(-box, box + 1):
            for b in range(-box, box + 1):
                x = GaussianInt(a, b)
                r = reduce_mod(x, y)
                res.checks += 1
                if r not in rep_set or _class_key(r, y) != _class_key(x, y):
                    res.fail(n=n, x=str(x), r=str(r))


def _small_gaussians(max_norm: int) -> list[GaussianInt]:
    r = int(max_norm ** 0.5) + 1
    return [GaussianInt(a, b) for a in range(-r, r + 1) for b in range(-r, r + 1)
            if a * a + b * b <= max_norm]


@suite("hecke")
def hecke(res, samples, rng, eps, threads, max_norm: int = 2):
    """Exhaustive decompose/recompose and label-vs-left-equivalence on small matrices."""
    vals = _small_gaussians(max_norm)
    by_det: dict[GaussianInt, list[tuple[Mat2, tuple]]] = {}
    labels: dict[GaussianInt, set] = {}
    for a in vals:
        for b in vals:
            for c in vals:
                for d in vals:
                    if not a * d - b * c:
                        continue
                    m = Mat2(a, b, c, d)
                    f = hecke_decompose(m)
                    if f.N not in labels:
                        labels[f.N] = set(enumerate_orbit_labels(f.N))
                    res.checks += 1
                    ok = (f.gamma.is_sl2() and f.gamma.is_gaussian()
                          and f.gamma * alpha_matrix(f.N, f.m, f.x) == m
                          and (f.m, f.x) in labels[f.N])
                    if not ok:
                        res.fail(matrix=m.to_json(), reason="round trip")
                    by_det.setdefault(f.N, []).append((m, (f.m, f.x)))
    res.stats["matrices"] = sum(len(v) for v in by_det.values())
    pairs = 0
    for group in by_det.values():
        for i, (m1, l1) in enumerate(group):
            for m2, l2 in group[i:]:
                pairs += 1
                if (l1 == l2) != left_equivalent(m1, m2):
                    res.fail(m1=m1.to_json(), m2=m2.to_json(), reason="label vs equivalence")
    res.checks += pairs
    res.stats["pairs"] = pairs


def _random_h3(rng: random.Random, spread: float = 6.0) -> H3Point:
    return H3Point(rng.uniform(-spread, spread), rng.uniform(-spread, spread),
                   10 ** rng.uniform(-2.0, 1.0))


def _tiling(res, samples, rng, eps, threads, reduce, sample_group, in_domain, margin, member):
    cases = [(_random_h3(rng), sample_group(rng)) for _ in range(samples)]

    def check(case):
        z, g = case
        r1 = reduce(z, eps)
        r2 = reduce(flt_apply(g, z), eps)
        return z, g, r1, r2

    worst_err = 0.0
    worst_iter = 0
    skipped = 0
    for z, g, r1, r2 in _pmap(check, cases, threads):
        res.checks += 1
        err = point_gap(flt_apply(r1.gamma, z), r1.point)
        worst_err = max(worst_err, err)
        worst_iter = max(worst_iter, r1.iterations, r2.iterations)
        if not (in_domain(r1.point, eps) and in_domain(r2.point, eps)):
            res.fail(z=z.to_json(), reason="reduced point outside domain")
        elif not (member(r1.gamma) and member(r2.gamma)):
            res.fail(z=z.to_json(), reason="witness not in the group")
        elif err >= WITNESS_ERR_TOL:
            res.fail(z=z.to_json(), reason=f"witness re-application error {err:.3g}")
        elif max(r1.iterations, r2.iterations) > MAX_ITERATIONS_SEEN:
            res.fail(z=z.to_json(), reason="iteration count")
        elif min(margin(r1.point), margin(r2.point)) < BOUNDARY_BAND:
            skipped += 1
        elif point_gap(r1.point, r2.point) > AGREE_TOL:
            res.fail(z=z.to_json(), g=g.to_json(), reason="orbit reduces to two points")
    res.stats.update(worst_witness_error=worst_err, max_iterations=worst_iter,
                     skipped_boundary=skipped)


@suite("picard")
def picard(res, samples, rng, eps, threads):
    """reduce_picard lands in the Picard domain and is constant on orbits."""
    _tiling(res, samples, rng, eps, threads, reduce_picard,
            lambda r: random_sl2_word(r, r.randint(1, 8)), in_picard, picard_margin,
            lambda g: g.is_gaussian() and g.is_sl2())


@suite("gamma")
def gamma(res, samples, rng, eps, threads):
    """reduce_gamma lands in F(G), with an exact witness, and is constant on orbits."""
    _tiling(res, samples, rng, eps, threads, reduce_gamma,
            lambda r: random_group_element(r, r.randint(1, 8)), in_F, gamma_margin,
            lambda g: gamma_membership(g) is not None)


@suite("f1")
def f1(res, samples, rng, eps, threads):
    """Nearest-center test for F1 agrees with the brute-force quantifier."""
    pts = [H3Point(rng.uniform(-6, 6), rng.uniform(-6, 6), rng.uniform(0.01, 2.0))
           for _ in range(samples)]
    outcomes = _pmap(lambda z: (in_F1(z, eps), in_F1_brute(z, eps)), pts, threads)
    inside = 0
    for z, (fast, slow) in zip(pts, outcomes):
        res.checks += 1
        inside += fast
        if fast != slow:
            res.fail(z=z.to_json())
    res.stats["inside"] = inside


def _random_real_word(rng: random.Random, length: int) -> Mat2:
    gens = (S, T_2, T_2.inverse(), W, W.inverse(), GAMMA_INV_R, T_1, T_1.inverse())
    g = Mat2.identity()
    for _ in range(length):
        g = g * rng.choice(gens)
    return g


@suite("realform")
def realform(res, samples, rng, eps, threads):
    """Real-form membership matches integrality of conj_eta; index two; tiling of H^2."""
    fixed = [Mat2.identity(), S, W, GAMMA_INV_R, T_2, T_1]
    words = fixed + [_random_real_word(rng, rng.randint(1, 6)) for _ in range(samples)]
    members = 0
    for g in words:
        res.checks += 1
        m = conj_eta(g)
        tag = gamma_int_membership(g)
        members += tag is not None
        if not (m.preserves(J) and m.det() == 1):
            res.fail(g=g.to_json(), reason="conj_eta does not preserve J")
        elif (tag is not None) != m.is_rational_integral():
            res.fail(g=g.to_json(), reason="membership vs integrality")
        elif tag != gamma_int_membership_via_w(g):
            res.fail(g=g.to_json(), reason="two membership tests disagree")
        elif tag is not None and gamma_membership(g) is None:
            res.fail(g=g.to_json(), reason="member of the real form but not of the complex group")
    res.stats["members"] = members
    res.checks += 3
    if gamma_int_membership(W) is not RealCoset.W:
        res.fail(reason="w is not in the non-identity coset")
    if W * W != S:
        res.fail(reason="w^2 != S")
    if gamma_int_membership(W * W) is not RealCoset.Identity:
        res.fail(reason="w^2 is not in the real Xi12")
    # tiling on H^2
    skipped = 0
    for _ in range(samples):
        z = H2Point(rng.uniform(-6, 6), 10 ** rng.uniform(-2, 1))
        g = _random_real_word(rng, rng.randint(1, 8))
        if gamma_int_membership(g) is None:
            continue
        r1, r2 = reduce_gamma_int(z, eps), reduce_gamma_int(flt_real(g, z), eps)
        res.checks += 1
        if not (in_FR(r1.point, eps) and in_FR(r2.point, eps)):
            res.fail(z=z.to_json(), reason="reduced point outside F_R")
        elif gamma_int_membership(r1.gamma) is None:
            res.fail(z=z.to_json(), reason="witness not in the group")
        elif min(fr_margin(r1.point), fr_margin(r2.point)) < BOUNDARY_BAND:
            skipped += 1
        elif max(abs(r1.point.x - r2.point.x), abs(r1.point.y - r2.point.y)) > AGREE_TOL * max(1, r1.point.y):
            res.fail(z=z.to_json(), g=g.to_json(), reason="orbit reduces to two points")
    res.stats["skipped_boundary"] = skipped


@suite("relation")
def relation(res, samples, rng, eps, threads):
    """F_R equals the real slice of F(G) union rho F(G), sampled in both directions."""
    report = relation_check(samples, rng, eps, band=BOUNDARY_BAND)
    res.checks += report.forward + report.backward
    for v in report.violations:
        res.fail(**v)
    res.stats.update(forward=report.forward, backward=report.backward,
                     skipped_boundary=report.skipped_boundary)


def _close(p, q, tol: float = 1e-12) -> bool:
    return all(abs(a - b) <= tol for a, b in zip(p, q))


@suite("torsion")
def torsion(res, samples, rng, eps, threads):
    """The quarter turn x -> i x + 1 - i fixes 1 and has order 4 up to sign."""
    P = ROT_ABOUT_1
    checks = {
        "in stabilizer of infinity": gamma_phi1_membership(P),
        "fixes 1": P.c == 0 and P.a + P.b == P.d,
        "a^2 = i": P.a * P.a == GaussianInt(0, 1),
        "P^4 = -I": P ** 4 == -Mat2.identity(),
        "lower powers nontrivial": all(P ** k not in (Mat2.identity(), -Mat2.identity())
                                       and (P ** k).a ** 2 != 1 for k in (1, 2, 3)),
        "boundary map 1 -> 1": _close(induced_action(P, (1.0, 0.0)), (1.0, 0.0)),
        "boundary map 2 -> 1+i": _close(induced_action(P, (2.0, 0.0)), (1.0, 1.0)),
    }
    for name, ok in checks.items():
        res.checks += 1
        if not ok:
            res.fail(check=name)


SUITE_ORDER = ("homomorphism", "orthogonality", "cosets", "residues", "hecke",
               "picard", "gamma", "f1", "realform", "relation", "torsion")


def run_suites(names: Iterable[str], samples: int, seed: int, eps: float,
               threads: int) -> list[SuiteResult]:
    """Run suites in order, each with its own generator derived from ``seed``."""
    out = []
    for name in names:
        rng = random.Random(f"{seed}:{name}")
        out.append(SUITES[name](samples, rng, eps, threads))
    return out

"""The split real form SL(2,R) -> SO(2,1), its integral points, and the domain on H^2.

H^2 sits in H^3 as the vertical half-plane over the real axis, ``x + y j``,
which every real matrix preserves.
"""
from __future__ import annotations

import enum
import math
import random
from dataclasses import dataclass, field
from typing import Optional

from . import kernels
from .errors import DomainError, NonConvergenceError
from .gaussian import INV_SQRT2, GaussianInt
from .hecke import XiClass, xi_classify
from .hyperbolic import (
    DEFAULT_MAX_ITER,
    WITNESS_TOL,
    H3Point,
    ReductionResult,
    _normalize_sign,
    default_eps,
    flt_apply,
    in_F,
)
from .matrices import Mat2, Mat3
from .orthogonal import R_HALF_PI, T_1, conj3, conj_in_basis, gamma_membership, is_so3_gaussian

BASIS_ETA = (
    Mat2(0, 1, 1, 0),
    Mat2(0, 1, -1, 0),
    Mat2(1, 0, 0, -1),
)
J = Mat3([[1, 0, 0], [0, -1, 0], [0, 0, 1]])
_GRAM_ETA = (1, -1, 1)

# the non-identity coset: w = (1/sqrt2)[[1,-1],[1,1]], and the shape V used to test it
W = Mat2(1, -1, 1, 1) * INV_SQRT2
_V_INV = Mat2(2, 1, 0, 1) * INV_SQRT2
GAMMA_INV_R = Mat2(-1, -1, 1, -1) * INV_SQRT2
T_2 = Mat2(1, 2, 0, 1)

# conjugate of R^2 by T_1: x -> 2 - x on the boundary
RHO = T_1 * R_HALF_PI ** 2 * T_1.inverse()

assert RHO == Mat2(GaussianInt(0, 1), GaussianInt(0, -2), 0, GaussianInt(0, -1))
assert is_so3_gaussian(conj3(RHO)) and gamma_membership(RHO) is not None


@dataclass(frozen=True)
class H2Point:
    x: float
    y: float

    def __post_init__(self):
        object.__setattr__(self, "x", float(self.x))
        object.__setattr__(self, "y", float(self.y))
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise DomainError("point coordinates must be finite")
        if self.y <= 0:
            raise DomainError(f"y must be positive, got {self.y}")

    def lift(self) -> H3Point:
        return H3Point(self.x, 0.0, self.y)

    def to_json(self) -> dict:
        return {"x": self.x, "y": self.y}


def _require_real_sl2(g: Mat2) -> None:
    if not g.is_real():
        raise DomainError("matrix has non-real entries")
    if not g.is_sl2():
        raise DomainError("matrix does not have determinant one")


def conj_eta(g: Mat2) -> Mat3:
    """Matrix of ``X -> g X g^-1`` in the real basis eta; preserves J."""
    _require_real_sl2(g)
    return conj_in_basis(g, BASIS_ETA, _GRAM_ETA)


class RealCoset(enum.Enum):
    Identity = "Identity"
    W = "W"


def _is_integer_matrix(g: Mat2) -> bool:
    return g.is_gaussian() and all(x.u.im == 0 for x in g.entries())


def gamma_int_membership(g: Mat2) -> Optional[RealCoset]:
    """Which coset of the real Xi12 the element lies in, or None if it is not integral."""
    _require_real_sl2(g)
    if _is_integer_matrix(g) and xi_classify(g) is XiClass.Xi12:
        return RealCoset.Identity
    h = g * _V_INV
    if _is_integer_matrix(h) and xi_classify(h) is XiClass.Xi2:
        return RealCoset.W
    return None


def gamma_int_membership_via_w(g: Mat2) -> Optional[RealCoset]:
    """Same test, phrased as ``g`` or ``g w^-1`` lying in the real Xi12."""
    _require_real_sl2(g)
    for tag, h in ((RealCoset.Identity, g), (RealCoset.W, g * W.inverse())):
        if _is_integer_matrix(h) and xi_classify(h) is XiClass.Xi12:
            return tag
    return None


def flt_real(g: Mat2, z: H2Point) -> H2Point:
    """Moebius action of a real matrix on the upper half-plane."""
    _require_real_sl2(g)
    a, b, c, d = (v.real for v in g.to_complex())
    den = (c * z.x + d) ** 2 + (c * z.y) ** 2
    x = ((a * z.x + b) * (c * z.x + d) + a * c * z.y * z.y) / den
    return H2Point(x, z.y / den)


def in_FR(z: H2Point, eps: Optional[float] = None) -> bool:
    eps = default_eps() if eps is None else eps
    return fr_margin(z) >= -eps


def fr_margin(z: H2Point) -> float:
    return min(z.x, 2.0 - z.x, (z.x - 1.0) ** 2 + z.y ** 2 - 2.0)


def _real_gap(z: H2Point, w: H2Point) -> float:
    return max(abs(z.x - w.x), abs(z.y - w.y)) / max(1.0, z.y, w.y)


def reduce_gamma_int(z: H2Point, eps: Optional[float] = None,
                     max_iter: int = DEFAULT_MAX_ITER) -> ReductionResult:
    """Move z into F_R using translation by 2 and the inversion in the circle about 1."""
    eps = default_eps() if eps is None else eps
    x, y, ops, iters, ok = kernels.walk_gamma_int(z.x, z.y, eps, max_iter)
    if not ok:
        raise NonConvergenceError(f"reduce_gamma_int: no convergence within {max_iter} iterations")
    gamma = Mat2.identity()
    word: list[tuple[str, int]] = []
    for code, a, _ in ops:
        if code == 0:
            gamma = Mat2(1, 2 * a, 0, 1) * gamma
            word.append(("T_2", a))
        else:
            gamma = GAMMA_INV_R * gamma
            word.append(("gamma_inv_R", 1))
    gamma = _normalize_sign(gamma, word)
    pt = H2Point(x, y)
    gap = _real_gap(flt_real(gamma, z), pt)
    if gap > WITNESS_TOL:
        raise NonConvergenceError(f"reduce_gamma_int: exact witness disagrees with the float walk by {gap:.3g}")
    return ReductionResult(gamma, pt, word, iters, z)  # type: ignore[arg-type]


@dataclass
class RelationReport:
    forward: int = 0
    backward: int = 0
    skipped_boundary: int = 0
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {"forward": self.forward, "backward": self.backward,
                "skipped_boundary": self.skipped_boundary, "violations": self.violations,
                "ok": self.ok}


def in_F_union_rho(p: H3Point, eps: float) -> bool:
    """Membership in F(G) or its image under rho (rho is an involution up to sign)."""
    return in_F(p, eps) or in_F(flt_apply(RHO, p), eps)


def _boundary_distance(z: H2Point) -> float:
    # F_R and the real slice of the union share the walls x = 0, x = 2 and the circle
    return min(abs(z.x), abs(z.x - 2.0), abs((z.x - 1.0) ** 2 + z.y ** 2 - 2.0))


def relation_check(samples: int, rng: random.Random, eps: Optional[float] = None,
                   band: float = 1e-6, y_max: float = 4.0) -> RelationReport:
    """Check both inclusions between F_R and the real slice of F(G) union rho F(G).

    Each direction collects ``samples`` points; points within ``band`` of a
    boundary on either side are skipped and counted.
    """
    eps = default_eps() if eps is None else eps
    report = RelationReport()
    while report.forward < samples:
        z = H2Point(rng.uniform(0.0, 2.0), rng.uniform(1e-3, y_max))
        if not in_FR(z, 0.0):
            continue
        if _boundary_distance(z) < band:
            report.skipped_boundary += 1
            continue
        report.forward += 1
        if not in_F_union_rho(z.lift(), eps):
            report.violations.append({"direction": "forward", "point": z.to_json()})
    while report.backward < samples:
        z = H2Point(rng.uniform(-1.0, 3.0), rng.uniform(1e-3, y_max))
        if not in_F_union_rho(z.lift(), 0.0):
            continue
        if _boundary_distance(z) < band:
            report.skipped_boundary += 1
            continue
        report.backward += 1
        if not in_FR(z, eps):
            report.violations.append({"direction": "backward", "point": z.to_json()})
    return report

"""Upper half-space model of H^3, the Moebius action, and the two reduction algorithms.

Points are quaternions ``x1 + x2 i + y j`` with ``y > 0``.  Geometry runs in
binary64; witnesses are composed exactly and re-applied to the input as a
final consistency check.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from typing import Callable, Optional

from shapely.geometry import Point, Polygon, box

from . import kernels
from .errors import DomainError, NonConvergenceError
from .gaussian import GaussianInt
from .matrices import Mat2
from .orthogonal import GAMMA_INV, ROT_ABOUT_1, S, gamma_phi1_membership

DEFAULT_EPS = 1e-9
DEFAULT_MAX_ITER = 10_000
# walk point and exact witness may drift apart by rounding; beyond this we refuse
WITNESS_TOL = 1e-6


def default_eps() -> float:
    """The tolerance in effect: ``FORD_EPS`` from the environment, else 1e-9."""
    raw = os.environ.get("FORD_EPS")
    if raw is None:
        return DEFAULT_EPS
    try:
        eps = float(raw)
    except ValueError as exc:
        raise DomainError(f"FORD_EPS={raw!r} is not a number") from exc
    if not (eps >= 0 and math.isfinite(eps)):
        raise DomainError(f"FORD_EPS={raw!r} must be finite and nonnegative")
    return eps


@dataclass(frozen=True)
class H3Point:
    x1: float
    x2: float
    y: float

    def __post_init__(self):
        for name in ("x1", "x2", "y"):
            object.__setattr__(self, name, float(getattr(self, name)))
        if not all(math.isfinite(v) for v in (self.x1, self.x2, self.y)):
            raise DomainError("point coordinates must be finite")
        if self.y <= 0:
            raise DomainError(f"y must be positive, got {self.y}")

    @property
    def x(self) -> complex:
        return complex(self.x1, self.x2)

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.x1, self.x2, self.y)

    def to_json(self) -> dict:
        return {"x1": self.x1, "x2": self.x2, "y": self.y}


@dataclass(frozen=True)
class IwasawaCoords:
    t1: float
    t2: float
    t3: float


def iwasawa(z: H3Point) -> IwasawaCoords:
    return IwasawaCoords(-math.log(z.y), z.x1, z.x2)


def iwasawa_inv(t: IwasawaCoords) -> H3Point:
    return H3Point(t.t2, t.t3, math.exp(-t.t1))


def flt_complex(a: complex, b: complex, c: complex, d: complex, z: H3Point) -> H3Point:
    x = z.x
    p = a * x + b
    q = c * x + d
    yy = z.y * z.y
    den = abs(q) ** 2 + abs(c) ** 2 * yy
    num = p * q.conjugate() + a * c.conjugate() * yy
    return H3Point(num.real / den, num.imag / den, z.y / den)


def flt_apply(g: Mat2, z: H3Point) -> H3Point:
    """``(a z + b)(c z + d)^-1`` in quaternion arithmetic."""
    if not g.is_sl2():
        raise DomainError("flt_apply needs determinant one")
    return flt_complex(*g.to_complex(), z)


def hyperbolic_distance(z: H3Point, w: H3Point) -> float:
    num = abs(z.x - w.x) ** 2 + (z.y - w.y) ** 2
    return math.acosh(1.0 + num / (2.0 * z.y * w.y))


def point_gap(z: H3Point, w: H3Point) -> float:
    """Largest coordinate difference, scaled by height so it is comparable across the cusp."""
    return max(abs(z.x1 - w.x1), abs(z.x2 - w.x2), abs(z.y - w.y)) / max(1.0, z.y, w.y)


# -- domains ---------------------------------------------------------------

def in_picard(z: H3Point, eps: Optional[float] = None) -> bool:
    eps = default_eps() if eps is None else eps
    return picard_margin(z) >= -eps


def picard_margin(z: H3Point) -> float:
    """Signed slack of the tightest Picard inequality; negative means outside."""
    return min(0.5 - abs(z.x1), z.x2, 0.5 - z.x2, z.x1 ** 2 + z.x2 ** 2 + z.y ** 2 - 1.0)


def nearest_center(x1: float, x2: float) -> complex:
    """Closest point of ``1 + (1+i)Z[i]`` to ``x1 + x2 i``, ties as in the reduction."""
    gx, gy = _gamma_center_shift(x1, x2)
    return complex(1 + gx, gy)


def _gamma_center_shift(x1: float, x2: float) -> tuple[int, int]:
    # (x - 1)/(1+i) rounded; returns the center offset (1+i)g as (re, im)
    wr = (x1 - 1.0 + x2) * 0.5
    wi = (x2 - x1 + 1.0) * 0.5
    _, g1, g2 = min(((-(a - b), -(a + b)), a, b)
                    for a in _candidates(wr) for b in _candidates(wi))
    return g1 - g2, g1 + g2


def _candidates(t: float) -> tuple[int, ...]:
    fl = math.floor(t)
    frac = t - fl
    if frac < 0.5:
        return (fl,)
    if frac > 0.5:
        return (fl + 1,)
    return (fl, fl + 1)


def in_F1(z: H3Point, eps: Optional[float] = None) -> bool:
    eps = default_eps() if eps is None else eps
    c = nearest_center(z.x1, z.x2)
    return abs(z.x - c) ** 2 + z.y ** 2 >= 2.0 - eps


def in_F1_brute(z: H3Point, eps: Optional[float] = None, radius: float = 5.0) -> bool:
    """F1 by checking every center of ``1 + (1+i)Z[i]`` within ``radius`` of x(z)."""
    eps = default_eps() if eps is None else eps
    # the box in (u, v) is centred on the lattice coordinates of x(z)
    r = int(math.ceil(radius)) + 2
    u0 = round((z.x1 - 1.0 + z.x2) * 0.5)
    v0 = round((z.x2 - z.x1 + 1.0) * 0.5)
    for u in range(u0 - r, u0 + r + 1):
        for v in range(v0 - r, v0 + r + 1):
            d = 1 + complex(u - v, u + v)
            if abs(d - z.x) <= radius and abs(z.x - d) ** 2 + z.y ** 2 < 2.0 - eps:
                return False
    return True


def in_triangle_G(x1: float, x2: float, eps: Optional[float] = None) -> bool:
    eps = default_eps() if eps is None else eps
    return x1 >= 1.0 - eps and x2 >= -eps and x1 + x2 <= 2.0 + eps


def gamma_margin(z: H3Point) -> float:
    """Signed slack of the tightest inequality cutting out F(G)."""
    return min(z.x1 - 1.0, z.x2, 2.0 - z.x1 - z.x2,
               (z.x1 - 1.0) ** 2 + z.x2 ** 2 + z.y ** 2 - 2.0)


def in_F(z: H3Point, eps: Optional[float] = None) -> bool:
    eps = default_eps() if eps is None else eps
    return in_triangle_G(z.x1, z.x2, eps) and (z.x1 - 1.0) ** 2 + z.x2 ** 2 + z.y ** 2 >= 2.0 - eps


def induced_action(g: Mat2, t: tuple[float, float]) -> tuple[float, float]:
    """Action of an upper-triangular group element on the boundary plane, ``x -> a^2 x + ab``."""
    if not gamma_phi1_membership(g):
        raise DomainError("induced action is only defined on the height stabilizer")
    a, b, _, _ = g.to_complex()
    w = a * a * complex(*t) + a * b
    return (w.real, w.imag)


# -- reduction -------------------------------------------------------------

@dataclass
class ReductionResult:
    gamma: Mat2
    point: H3Point
    word: list[tuple[str, int]] = field(default_factory=list)
    iterations: int = 0
    start: Optional[H3Point] = None

    def to_json(self) -> dict:
        return {
            "gamma": self.gamma.to_json(),
            "point": self.point.to_json(),
            "word": [[tag, e] for tag, e in self.word],
            "iterations": self.iterations,
            "input": None if self.start is None else self.start.to_json(),
        }


_T_UNIT_DIAG = Mat2(GaussianInt(0, 1), 0, 0, GaussianInt(0, -1))
_ROT_POWERS = [ROT_ABOUT_1 ** k for k in range(4)]


def _normalize_sign(g: Mat2, word: list) -> Mat2:
    for entry in g.entries():
        if entry:
            v = entry.to_complex()
            negative = v.real < 0 if abs(v.real) > 1e-12 else v.imag < 0
            if negative:
                word.append(("-I", 1))
                return -g
            return g
    return g


def _finish(gamma, pt, word, iters, start, apply: Callable, name: str) -> ReductionResult:
    gamma = _normalize_sign(gamma, word)
    check = apply(gamma, start)
    if point_gap(check, pt) > WITNESS_TOL:
        raise NonConvergenceError(
            f"{name}: exact witness disagrees with the float walk by {point_gap(check, pt):.3g}")
    return ReductionResult(gamma, pt, word, iters, start)


def reduce_picard(z: H3Point, eps: Optional[float] = None,
                  max_iter: int = DEFAULT_MAX_ITER) -> ReductionResult:
    """Move z into the Picard domain by Z[i] translations, ``z -> -1/z`` and ``x -> -x``."""
    eps = default_eps() if eps is None else eps
    x1, x2, y, ops, iters, ok = kernels.walk_picard(z.x1, z.x2, z.y, eps, max_iter)
    if not ok:
        raise NonConvergenceError(f"reduce_picard: no convergence within {max_iter} iterations")
    gamma = Mat2.identity()
    word: list[tuple[str, int]] = []
    for code, a, b in ops:
        if code == 0:
            gamma = Mat2(1, GaussianInt(a, b), 0, 1) * gamma
            if a:
                word.append(("T_1", a))
            if b:
                word.append(("T_i", b))
        elif code == 1:
            gamma = S * gamma
            word.append(("S", 1))
        else:
            gamma = _T_UNIT_DIAG * gamma
            word.append(("diag(i,-i)", 1))
    return _finish(gamma, H3Point(x1, x2, y), word, iters, z, flt_apply, "reduce_picard")


def gamma_word_matrix(code: int, a: int, b: int) -> tuple[Mat2, list[tuple[str, int]]]:
    """Exact matrix and word tags for one operation of the Gamma walk."""
    if code == 0:
        tags = []
        if a:
            tags.append(("T_{1+i}", a))
        if b:
            tags.append(("T_{1-i}", -b))
        return Mat2(1, GaussianInt(1, 1) * GaussianInt(a, b), 0, 1), tags
    if code == 1:
        return GAMMA_INV, [("gamma_inv", 1)]
    return _ROT_POWERS[a % 4], [("T_{1-i}R", a)]


def reduce_gamma(z: H3Point, eps: Optional[float] = None,
                 max_iter: int = DEFAULT_MAX_ITER) -> ReductionResult:
    """Move z into F(G) and return the exact group element that does it."""
    eps = default_eps() if eps is None else eps
    x1, x2, y, ops, iters, ok = kernels.walk_gamma(z.x1, z.x2, z.y, eps, max_iter)
    if not ok:
        raise NonConvergenceError(f"reduce_gamma: no convergence within {max_iter} iterations")
    gamma = Mat2.identity()
    word: list[tuple[str, int]] = []
    for op in ops:
        m, tags = gamma_word_matrix(*op)
        gamma = m * gamma
        word.extend(tags)
    return _finish(gamma, H3Point(x1, x2, y), word, iters, z, flt_apply, "reduce_gamma")


# -- geometry export -------------------------------------------------------

INFINITY_TAG = "infinity"
_QUAD_SEGS = 64


def _polylines(geom) -> list[list[list[float]]]:
    if geom.is_empty:
        return []
    parts = getattr(geom, "geoms", [geom])
    out = []
    for part in parts:
        if isinstance(part, Polygon):
            out.append([[round(x, 12), round(y, 12)] for x, y in part.exterior.coords])
    return out


def _gamma_slice(y: float):
    tri = Polygon([(1, 0), (2, 0), (1, 1)])
    r2 = 2.0 - y * y
    if r2 <= 0:
        return tri
    return tri.difference(Point(1, 0).buffer(math.sqrt(r2), quad_segs=_QUAD_SEGS))


def _picard_slice(y: float):
    sq = box(-0.5, 0.0, 0.5, 0.5)
    r2 = 1.0 - y * y
    if r2 <= 0:
        return sq
    return sq.difference(Point(0, 0).buffer(math.sqrt(r2), quad_segs=_QUAD_SEGS))


def _real_slice(y: float) -> list[list[float]]:
    r2 = 2.0 - y * y
    if r2 <= 0:
        return [[0.0, 2.0]]
    r = math.sqrt(r2)
    pieces = [[0.0, min(2.0, 1.0 - r)], [max(0.0, 1.0 + r), 2.0]]
    return [p for p in pieces if p[0] <= p[1]]


def export_domain(which: str, slices: Optional[list[float]] = None) -> dict:
    """Vertices, face inequalities and horizontal cross-sections of a fundamental domain."""
    slices = list(slices or [])
    if any(not (y > 0 and math.isfinite(y)) for y in slices):
        raise DomainError("slice heights must be positive and finite")
    if which == "gamma":
        doc = {
            "domain": "gamma",
            "dimension": 3,
            "vertices": [
                {"tag": "1+sqrt2 j", "x1": 1.0, "x2": 0.0, "y": math.sqrt(2.0)},
                {"tag": "2+j", "x1": 2.0, "x2": 0.0, "y": 1.0},
                {"tag": "1+i+j", "x1": 1.0, "x2": 1.0, "y": 1.0},
                {"tag": INFINITY_TAG, "ideal": True},
            ],
            "faces": [
                {"kind": "plane", "normal": [1.0, 0.0], "offset": 1.0, "sense": ">="},
                {"kind": "plane", "normal": [0.0, 1.0], "offset": 0.0, "sense": ">="},
                {"kind": "plane", "normal": [1.0, 1.0], "offset": 2.0, "sense": "<="},
                {"kind": "hemisphere", "center": [1.0, 0.0], "radius_sq": 2.0, "sense": "outside"},
            ],
        }
        cut = _gamma_slice
    elif which == "picard":
        doc = {
            "domain": "picard",
            "dimension": 3,
            "vertices": [
                {"tag": "-1/2+sqrt3/2 j", "x1": -0.5, "x2": 0.0, "y": math.sqrt(0.75)},
                {"tag": "1/2+sqrt3/2 j", "x1": 0.5, "x2": 0.0, "y": math.sqrt(0.75)},
                {"tag": "-1/2+i/2+sqrt2/2 j", "x1": -0.5, "x2": 0.5, "y": math.sqrt(0.5)},
                {"tag": "1/2+i/2+sqrt2/2 j", "x1": 0.5, "x2": 0.5, "y": math.sqrt(0.5)},
                {"tag": INFINITY_TAG, "ideal": True},
            ],
            "faces": [
                {"kind": "plane", "normal": [1.0, 0.0], "offset": -0.5, "sense": ">="},
                {"kind": "plane", "normal": [1.0, 0.0], "offset": 0.5, "sense": "<="},
                {"kind": "plane", "normal": [0.0, 1.0], "offset": 0.0, "sense": ">="},
                {"kind": "plane", "normal": [0.0, 1.0], "offset": 0.5, "sense": "<="},
                {"kind": "hemisphere", "center": [0.0, 0.0], "radius_sq": 1.0, "sense": "outside"},
            ],
        }
        cut = _picard_slice
    elif which == "gammaInt":
        doc = {
            "domain": "gammaInt",
            "dimension": 2,
            "vertices": [
                {"tag": "i", "x": 0.0, "y": 1.0},
                {"tag": "2+i", "x": 2.0, "y": 1.0},
                {"tag": INFINITY_TAG, "ideal": True},
            ],
            "faces": [
                {"kind": "line", "normal": [1.0], "offset": 0.0, "sense": ">="},
                {"kind": "line", "normal": [1.0], "offset": 2.0, "sense": "<="},
                {"kind": "halfcircle", "center": [1.0], "radius_sq": 2.0, "sense": "outside"},
            ],
        }
        doc["slices"] = [{"y": y, "intervals": _real_slice(y)} for y in slices]
        return doc
    else:
        raise DomainError(f"unknown domain {which!r}; expected picard, gamma or gammaInt")
    doc["slices"] = [{"y": y, "polylines": _polylines(cut(y))} for y in slices]
    return doc

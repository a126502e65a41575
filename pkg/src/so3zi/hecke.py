"""SL2(Z[i]) layer: reduction mod (1+i), Xi classes and the Gaussian Hecke decomposition."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import BudgetExceededError, DomainError
from .gaussian import (
    GaussianInt,
    IntLike,
    ext_ggcd,
    ggcd,
    omega_reps,
    reduce_mod,
    standard_associate,
    unit,
)
from .matrices import Mat2, red2


class XiClass(enum.Enum):
    Xi1 = "Xi1"
    Xi2 = "Xi2"
    Xi12 = "Xi12"


_XI_OF_RESIDUE = {
    (1, 0, 0, 1): XiClass.Xi12,
    (0, 1, 1, 0): XiClass.Xi12,
    (0, 1, 1, 1): XiClass.Xi1,
    (1, 1, 0, 1): XiClass.Xi1,
    (1, 1, 1, 0): XiClass.Xi2,
    (1, 0, 1, 1): XiClass.Xi2,
}


def xi_classify(g: Mat2) -> XiClass:
    if not (g.is_gaussian() and g.is_sl2()):
        raise DomainError("xi_classify needs an element of SL2(Z[i])")
    return _XI_OF_RESIDUE[red2(g)]


def in_xi12(g: Mat2) -> bool:
    """Membership in the subgroup Xi12 = red^-1({I, S}) of SL2(Z[i])."""
    return g.is_gaussian() and g.is_sl2() and _XI_OF_RESIDUE[red2(g)] is XiClass.Xi12


def alpha_matrix(N: IntLike, m: IntLike, x: IntLike) -> Mat2:
    """The orbit representative ``[[m, x], [0, N/m]]``."""
    N, m, x = GaussianInt.coerce(N), GaussianInt.coerce(m), GaussianInt.coerce(x)
    if not N:
        raise DomainError("N must be nonzero")
    if not m or not m.divides(N):
        raise DomainError(f"m={m} does not divide N={N}")
    q = N.exact_div(m)
    if not q.is_standard():
        raise DomainError(f"N/m={q} is not standard")
    if reduce_mod(x, q) != x:
        raise DomainError(f"x={x} is not in the residue system of {q}")
    return Mat2(m, x, 0, q)


@dataclass(frozen=True)
class HeckeFactors:
    gamma: Mat2
    m: GaussianInt
    x: GaussianInt
    N: GaussianInt

    def alpha(self) -> Mat2:
        return alpha_matrix(self.N, self.m, self.x)

    def to_json(self) -> dict:
        return {"gamma": self.gamma.to_json(), "m": str(self.m), "x": str(self.x), "N": str(self.N)}


def hecke_decompose(alpha: Mat2, certificate=None) -> HeckeFactors:
    """Factor ``alpha = gamma * [[m, x], [0, N/m]]`` with gamma in SL2(Z[i]).

    ``certificate`` optionally supplies ``(q0, s0)`` with ``p*s0 - r*q0 == 1``;
    the label ``(m, x)`` does not depend on that choice.
    """
    a, b, c, d = alpha.gaussian_entries()
    N = a * d - b * c
    if not N:
        raise DomainError("determinant is zero")
    g = ggcd(a, c)
    j, _ = standard_associate(N.exact_div(g))
    m = g * unit(-j)
    q_std = N.exact_div(m)
    p, r = a.exact_div(m), c.exact_div(m)
    if certificate is None:
        one, s0, q0 = ext_ggcd(p, r)
        assert one == 1
    else:
        q0, s0 = (GaussianInt.coerce(t) for t in certificate)
        if p * s0 - r * q0 != 1:
            raise DomainError("certificate does not satisfy p*s0 - r*q0 = 1")
    x0 = s0 * b - q0 * d
    x = reduce_mod(x0, q_std)
    ell = (x - x0).exact_div(q_std)
    q, s = q0 - p * ell, s0 - r * ell
    gamma = Mat2(p, q, r, s)
    return HeckeFactors(gamma, m, x, N)


def standard_divisors(N: IntLike, bound: int = 10**6) -> list[GaussianInt]:
    """All standard divisors of N, found by scanning norms dividing norm(N)."""
    N = GaussianInt.coerce(N)
    if not N:
        raise DomainError("N must be nonzero")
    n = N.norm()
    if n > bound:
        raise BudgetExceededError(f"norm(N)={n} exceeds enumeration budget {bound}")
    out = []
    for k in range(1, n + 1):
        if n % k:
            continue
        for a in range(1, math.isqrt(k) + 1):
            b2 = k - a * a
            b = math.isqrt(b2)
            if b * b == b2:
                d = GaussianInt(a, b)
                if d.divides(N):
                    out.append(d)
    return out


def enumerate_orbit_labels(N: IntLike, bound: int = 10**6) -> list[tuple[GaussianInt, GaussianInt]]:
    """Every label ``(m, x)`` with m | N, N/m standard and x in the residues of N/m."""
    N = GaussianInt.coerce(N)
    labels = []
    for q in standard_divisors(N, bound):
        m = N.exact_div(q)
        labels.extend((m, x) for x in omega_reps(q).reps)
    return labels


def left_equivalent(alpha1: Mat2, alpha2: Mat2) -> bool:
    """Whether ``alpha2 = gamma * alpha1`` for some gamma in SL2(Z[i])."""
    a1 = alpha1.gaussian_entries()
    a2 = alpha2.gaussian_entries()
    n1 = a1[0] * a1[3] - a1[1] * a1[2]
    n2 = a2[0] * a2[3] - a2[1] * a2[2]
    if n1 != n2 or not n1:
        return False
    # gamma = alpha2 * adj(alpha1) / N
    a, b, c, d = a2
    e, f, g, h = a1[3], -a1[1], -a1[2], a1[0]
    prod = (a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)
    return all(n1.divides(z) for z in prod)

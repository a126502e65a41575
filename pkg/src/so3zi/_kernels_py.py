"""Pure-Python reduction walks; mirrors ``_kernels.pyx`` operation for operation.

Each walk reduces a floating-point point and returns the sequence of
generator applications it made, as ``(code, a, b)`` triples, so the caller
can rebuild an exact witness.  Codes:

picard     0: translate by a+bi     1: z -> -1/z         2: x -> -x
gamma      0: translate by (1+i)(a+bi)   1: inversion in |x-1|^2+y^2=2
           2: a-th power of the quarter turn about 1
gamma_int  0: translate by 2a       1: inversion in (x-1)^2+y^2=2
"""
from __future__ import annotations

import math

_H = 0.5
_S2 = math.sqrt(0.5)

# inversion in the sphere of radius sqrt(2) about 1: (1/(1+i)) [[i, -2-i], [i, -i]]
GINV = (_H, _H, -1.5, _H, _H, _H, -_H, -_H)
# its real-form counterpart (1/sqrt2) [[-1, -1], [1, -1]]
GINV_R = (-_S2, 0.0, -_S2, 0.0, _S2, 0.0, -_S2, 0.0)


def mobius(coef, x1, x2, y):
    """Apply ``[[a, b], [c, d]]`` (complex entries as re/im pairs) to ``x1 + x2 i + y j``."""
    ar, ai, br, bi, cr, ci, dr, di = coef
    # p = a x + b, q = c x + d
    pr = ar * x1 - ai * x2 + br
    pi = ar * x2 + ai * x1 + bi
    qr = cr * x1 - ci * x2 + dr
    qi = cr * x2 + ci * x1 + di
    cc = cr * cr + ci * ci
    den = qr * qr + qi * qi + cc * y * y
    # p * conj(q) + a * conj(c) * y^2
    nr = pr * qr + pi * qi + (ar * cr + ai * ci) * y * y
    ni = pi * qr - pr * qi + (ai * cr - ar * ci) * y * y
    return nr / den, ni / den, y / den


def _round_candidates(t):
    fl = math.floor(t)
    frac = t - fl
    if frac < 0.5:
        return (fl,)
    if frac > 0.5:
        return (fl + 1,)
    return (fl, fl + 1)


def walk_picard(x1, x2, y, eps, max_iter):
    ops = []
    it = 0
    while it < max_iter:
        it += 1
        n1 = math.floor(x1 + 0.5)
        n2 = math.floor(x2 + 0.5)
        if n1 or n2:
            x1 -= n1
            x2 -= n2
            ops.append((0, -n1, -n2))
        if x2 < 0.0:
            x1, x2 = -x1, -x2
            ops.append((2, 0, 0))
        r2 = x1 * x1 + x2 * x2 + y * y
        if r2 < 1.0 - eps:
            x1, x2, y = -x1 / r2, x2 / r2, y / r2
            ops.append((1, 0, 0))
        else:
            return x1, x2, y, ops, it, True
    return x1, x2, y, ops, it, False


def _in_triangle(x1, x2, eps):
    return x1 >= 1.0 - eps and x2 >= -eps and x1 + x2 <= 2.0 + eps


def walk_gamma(x1, x2, y, eps, max_iter):
    ops = []
    it = 0
    converged = False
    while it < max_iter:
        it += 1
        # nearest point of 1 + (1+i)Z[i]: round (x - 1)/(1+i)
        wr = (x1 - 1.0 + x2) * 0.5
        wi = (x2 - x1 + 1.0) * 0.5
        best = None
        for g1 in _round_candidates(wr):
            for g2 in _round_candidates(wi):
                # translation by -(1+i)(g1 + g2 i)
                key = (-(g1 - g2), -(g1 + g2))
                if best is None or key < best[0]:
                    best = (key, g1, g2)
        _, g1, g2 = best
        if g1 or g2:
            x1 -= g1 - g2
            x2 -= g1 + g2
            ops.append((0, -g1, -g2))
        d2 = (x1 - 1.0) ** 2 + x2 * x2 + y * y
        if d2 < 2.0 - eps:
            x1, x2, y = mobius(GINV, x1, x2, y)
            ops.append((1, 0, 0))
        else:
            converged = True
            break
    if not converged:
        return x1, x2, y, ops, it, False
    # quarter turn about 1: x -> i x + 1 - i
    best_k, best_viol = 0, math.inf
    r1, r2 = x1, x2
    for k in range(4):
        if _in_triangle(r1, r2, eps):
            best_k = k
            break
        viol = max(1.0 - r1, -r2, r1 + r2 - 2.0)
        if viol < best_viol:
            best_k, best_viol = k, viol
        r1, r2 = 1.0 - r2, r1 - 1.0
    for _ in range(best_k):
        x1, x2 = 1.0 - x2, x1 - 1.0
    if best_k:
        ops.append((2, best_k, 0))
    return x1, x2, y, ops, it, True


def walk_gamma_int(x, y, eps, max_iter):
    ops = []
    it = 0
    while it < max_iter:
        it += 1
        k = math.floor((x - 1.0) * 0.5 + 0.5)
        if k:
            x -= 2 * k
            ops.append((0, -k, 0))
        if (x - 1.0) ** 2 + y * y < 2.0 - eps:
            x, _, y = mobius(GINV_R, x, 0.0, y)
            ops.append((1, 0, 0))
        else:
            return x, y, ops, it, True
    return x, y, ops, it, False


def walk_gamma_batch(points, eps, max_iter):
    """Reduce many points; returns final coordinates and iteration counts only.

    The rotation into the triangle is left to the caller since it does not
    change y or the iteration count.
    """
    out = []
    for x1, x2, y in points:
        it = 0
        ok = False
        while it < max_iter:
            it += 1
            wr = (x1 - 1.0 + x2) * 0.5
            wi = (x2 - x1 + 1.0) * 0.5
            best = min(((-(g1 - g2), -(g1 + g2)), g1, g2)
                       for g1 in _round_candidates(wr) for g2 in _round_candidates(wi))
            _, g1, g2 = best
            x1 -= g1 - g2
            x2 -= g1 + g2
            if (x1 - 1.0) ** 2 + x2 * x2 + y * y < 2.0 - eps:
                x1, x2, y = mobius(GINV, x1, x2, y)
            else:
                ok = True
                break
        out.append((x1, x2, y, it, ok))
    return out

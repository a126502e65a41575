# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled reduction walks.  Same contract and operation codes as ``_kernels_py``."""

from libc.math cimport floor, sqrt, INFINITY

cdef double _H = 0.5
cdef double _S2 = sqrt(0.5)

GINV = (_H, _H, -1.5, _H, _H, _H, -_H, -_H)
GINV_R = (-_S2, 0.0, -_S2, 0.0, _S2, 0.0, -_S2, 0.0)

cdef double[8] _GINV = [0.5, 0.5, -1.5, 0.5, 0.5, 0.5, -0.5, -0.5]


cdef inline void _mobius(const double* c, double x1, double x2, double y,
                         double* o1, double* o2, double* oy) noexcept nogil:
    cdef double pr = c[0] * x1 - c[1] * x2 + c[2]
    cdef double pi = c[0] * x2 + c[1] * x1 + c[3]
    cdef double qr = c[4] * x1 - c[5] * x2 + c[6]
    cdef double qi = c[4] * x2 + c[5] * x1 + c[7]
    cdef double yy = y * y
    cdef double den = qr * qr + qi * qi + (c[4] * c[4] + c[5] * c[5]) * yy
    o1[0] = (pr * qr + pi * qi + (c[0] * c[4] + c[1] * c[5]) * yy) / den
    o2[0] = (pi * qr - pr * qi + (c[1] * c[4] - c[0] * c[5]) * yy) / den
    oy[0] = y / den


def mobius(coef, double x1, double x2, double y):
    cdef double c[8]
    cdef int k
    for k in range(8):
        c[k] = coef[k]
    cdef double o1, o2, oy
    _mobius(c, x1, x2, y, &o1, &o2, &oy)
    return o1, o2, oy


cdef inline bint _in_triangle(double x1, double x2, double eps) noexcept nogil:
    return x1 >= 1.0 - eps and x2 >= -eps and x1 + x2 <= 2.0 + eps


cdef inline int _cands(double t, long* out) noexcept nogil:
    cdef double fl = floor(t)
    cdef double frac = t - fl
    if frac < 0.5:
        out[0] = <long>fl
        return 1
    if frac > 0.5:
        out[0] = <long>fl + 1
        return 1
    out[0] = <long>fl
    out[1] = <long>fl + 1
    return 2


def walk_picard(double x1, double x2, double y, double eps, long max_iter):
    cdef list ops = []
    cdef long it = 0, n1, n2
    cdef double r2
    while it < max_iter:
        it += 1
        n1 = <long>floor(x1 + 0.5)
        n2 = <long>floor(x2 + 0.5)
        if n1 != 0 or n2 != 0:
            x1 -= n1
            x2 -= n2
            ops.append((0, -n1, -n2))
        if x2 < 0.0:
            x1 = -x1
            x2 = -x2
            ops.append((2, 0, 0))
        r2 = x1 * x1 + x2 * x2 + y * y
        if r2 < 1.0 - eps:
            x1, x2, y = -x1 / r2, x2 / r2, y / r2
            ops.append((1, 0, 0))
        else:
            return x1, x2, y, ops, it, True
    return x1, x2, y, ops, it, False


cdef inline bint _center_gamma(double* x1, double* x2, long* g1o, long* g2o) noexcept nogil:
    cdef double wr = (x1[0] - 1.0 + x2[0]) * 0.5
    cdef double wi = (x2[0] - x1[0] + 1.0) * 0.5
    cdef long c1[2]
    cdef long c2[2]
    cdef int n1 = _cands(wr, c1), n2 = _cands(wi, c2)
    cdef int i, j
    cdef long k0, k1, b0 = 0, b1 = 0, g1 = 0, g2 = 0
    cdef bint have = False
    for i in range(n1):
        for j in range(n2):
            k0 = -(c1[i] - c2[j])
            k1 = -(c1[i] + c2[j])
            if not have or k0 < b0 or (k0 == b0 and k1 < b1):
                have = True
                b0, b1, g1, g2 = k0, k1, c1[i], c2[j]
    x1[0] -= g1 - g2
    x2[0] -= g1 + g2
    g1o[0] = g1
    g2o[0] = g2
    return g1 != 0 or g2 != 0


def walk_gamma(double x1, double x2, double y, double eps, long max_iter):
    cdef list ops = []
    cdef long it = 0, g1, g2
    cdef bint converged = False
    cdef double d2, r1, r2, t, viol, best_viol
    cdef int k, best_k
    while it < max_iter:
        it += 1
        if _center_gamma(&x1, &x2, &g1, &g2):
            ops.append((0, -g1, -g2))
        d2 = (x1 - 1.0) * (x1 - 1.0) + x2 * x2 + y * y
        if d2 < 2.0 - eps:
            _mobius(_GINV, x1, x2, y, &x1, &x2, &y)
            ops.append((1, 0, 0))
        else:
            converged = True
            break
    if not converged:
        return x1, x2, y, ops, it, False
    best_k = 0
    best_viol = INFINITY
    r1, r2 = x1, x2
    for k in range(4):
        if _in_triangle(r1, r2, eps):
            best_k = k
            break
        viol = max(1.0 - r1, -r2, r1 + r2 - 2.0)
        if viol < best_viol:
            best_k, best_viol = k, viol
        t = r1
        r1 = 1.0 - r2
        r2 = t - 1.0
    for k in range(best_k):
        t = x1
        x1 = 1.0 - x2
        x2 = t - 1.0
    if best_k:
        ops.append((2, best_k, 0))
    return x1, x2, y, ops, it, True


def walk_gamma_int(double x, double y, double eps, long max_iter):
    cdef list ops = []
    cdef long it = 0, k
    cdef double den
    cdef double s = _S2
    while it < max_iter:
        it += 1
        k = <long>floor((x - 1.0) * 0.5 + 0.5)
        if k != 0:
            x -= 2 * k
            ops.append((0, -k, 0))
        if (x - 1.0) * (x - 1.0) + y * y < 2.0 - eps:
            # (-s x - s)/(s x - s) on the real slice, as a full Moebius step
            den = (s * x - s) * (s * x - s) + s * s * y * y
            x = ((-s * x - s) * (s * x - s) - s * s * y * y) / den
            y = y / den
            ops.append((1, 0, 0))
        else:
            return x, y, ops, it, True
    return x, y, ops, it, False


cdef void _walk_gamma_final(double* x1, double* x2, double* y, double eps,
                            long max_iter, long* iters, bint* ok) noexcept nogil:
    cdef long it = 0, g1, g2
    cdef double d2
    ok[0] = False
    while it < max_iter:
        it += 1
        _center_gamma(x1, x2, &g1, &g2)
        d2 = (x1[0] - 1.0) * (x1[0] - 1.0) + x2[0] * x2[0] + y[0] * y[0]
        if d2 < 2.0 - eps:
            _mobius(_GINV, x1[0], x2[0], y[0], x1, x2, y)
        else:
            ok[0] = True
            break
    iters[0] = it


def walk_gamma_batch(points, double eps, long max_iter):
    """Reduce many points in C; returns final coordinates and iteration counts only.

    The rotation into the triangle is left to the caller since it does not
    change y or the iteration count.
    """
    cdef list out = []
    cdef double x1, x2, y
    cdef long it
    cdef bint ok
    for p in points:
        x1, x2, y = p
        with nogil:
            _walk_gamma_final(&x1, &x2, &y, eps, max_iter, &it, &ok)
        out.append((x1, x2, y, it, ok))
    return out

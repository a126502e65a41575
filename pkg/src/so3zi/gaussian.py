"""Exact arithmetic in Z[i] and in the localized cyclotomic ring Z[w8, 1/(1+i)].

Elements of Z[w8, 1/(1+i)] are stored as ``(u + v*w8) / (1+i)**k`` with
``u, v`` Gaussian integers, using ``w8**2 = i``.  Since ``{1, w8}`` is a free
Z[i]-basis of Z[w8], the normalized form (``k == 0`` or ``1+i`` does not
divide both ``u`` and ``v``) is unique, so equality is structural.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Union

from .errors import DomainError

IntLike = Union[int, "GaussianInt"]


class GaussianInt:
    """An element ``re + im*i`` of Z[i]."""

    __slots__ = ("re", "im")

    def __init__(self, re: int = 0, im: int = 0):
        self.re = int(re)
        self.im = int(im)

    @classmethod
    def coerce(cls, value: IntLike) -> "GaussianInt":
        if isinstance(value, GaussianInt):
            return value
        if isinstance(value, int):
            return cls(value, 0)
        if isinstance(value, str):
            return parse_gaussian(value)
        raise TypeError(f"cannot convert {type(value).__name__} to GaussianInt")

    def __add__(self, other):
        if isinstance(other, int):
            return GaussianInt(self.re + other, self.im)
        if isinstance(other, GaussianInt):
            return GaussianInt(self.re + other.re, self.im + other.im)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, int):
            return GaussianInt(self.re - other, self.im)
        if isinstance(other, GaussianInt):
            return GaussianInt(self.re - other.re, self.im - other.im)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, int):
            return GaussianInt(other - self.re, -self.im)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, int):
            return GaussianInt(self.re * other, self.im * other)
        if isinstance(other, GaussianInt):
            a, b, c, d = self.re, self.im, other.re, other.im
            return GaussianInt(a * c - b * d, a * d + b * c)
        return NotImplemented

    __rmul__ = __mul__

    def __neg__(self):
        return GaussianInt(-self.re, -self.im)

    def __pow__(self, n: int):
        if n < 0:
            raise DomainError("negative powers are not Gaussian integers")
        result = GaussianInt(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            return self.im == 0 and self.re == other
        if isinstance(other, GaussianInt):
            return self.re == other.re and self.im == other.im
        return NotImplemented

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re or self.im)

    def __repr__(self):
        return f"GaussianInt({self.re}, {self.im})"

    def __str__(self):
        return format_gaussian(self)

    def __complex__(self):
        return complex(self.re, self.im)

    def norm(self) -> int:
        return self.re * self.re + self.im * self.im

    def conjugate(self) -> "GaussianInt":
        return GaussianInt(self.re, -self.im)

    def is_standard(self) -> bool:
        return self.re > 0 and self.im >= 0

    def divides(self, other: IntLike) -> bool:
        other = GaussianInt.coerce(other)
        if not self:
            return not other
        n = self.norm()
        num = other * self.conjugate()
        return num.re % n == 0 and num.im % n == 0

    def exact_div(self, other: IntLike) -> "GaussianInt":
        """Return ``self / other``, raising DomainError if it is not in Z[i]."""
        other = GaussianInt.coerce(other)
        if not other:
            raise DomainError("division by zero")
        n = other.norm()
        num = self * other.conjugate()
        if num.re % n or num.im % n:
            raise DomainError(f"{other} does not divide {self}")
        return GaussianInt(num.re // n, num.im // n)


ZERO = GaussianInt(0, 0)
ONE = GaussianInt(1, 0)
I = GaussianInt(0, 1)
ONE_PLUS_I = GaussianInt(1, 1)
UNITS = (ONE, I, GaussianInt(-1, 0), GaussianInt(0, -1))


def unit(j: int) -> GaussianInt:
    """Return ``i**j``."""
    return UNITS[j % 4]


_LITERAL = re.compile(
    r"^\s*(?:(?P<re>[+-]?\d+)(?:\s*(?P<sign>[+-])\s*(?P<im>\d*)\s*i)?"
    r"|(?P<pure>[+-]?\d*)\s*i)\s*$"
)


def parse_gaussian(text: str) -> GaussianInt:
    """Parse literals such as ``"3-2i"``, ``"-i"``, ``"2i"`` or ``"0"``."""
    m = _LITERAL.match(text.replace("−", "-"))
    if m is None:
        raise DomainError(f"not a Gaussian integer literal: {text!r}")
    if m.group("pure") is not None:
        coef = m.group("pure")
        if coef in ("", "+"):
            return GaussianInt(0, 1)
        if coef == "-":
            return GaussianInt(0, -1)
        return GaussianInt(0, int(coef))
    re_part = int(m.group("re"))
    if m.group("sign") is None:
        return GaussianInt(re_part, 0)
    im_part = int(m.group("im") or "1")
    return GaussianInt(re_part, im_part if m.group("sign") == "+" else -im_part)


def format_gaussian(z: GaussianInt) -> str:
    a, b = z.re, z.im
    if b == 0:
        return str(a)
    coef = {1: "", -1: "-"}.get(b, str(b))
    if a == 0:
        return f"{coef}i"
    if b > 0:
        return f"{a}+{coef}i"
    return f"{a}{coef}i"


def standard_associate(z: IntLike) -> tuple[int, GaussianInt]:
    """Return ``(j, s)`` with ``s = i**j * z`` standard (``Re > 0, Im >= 0``)."""
    z = GaussianInt.coerce(z)
    if not z:
        raise DomainError("no standard associate of zero")
    s = z
    for j in range(4):
        if s.re > 0 and s.im >= 0:
            return j, s
        s = s * I
    raise AssertionError("unreachable")


def _round_half_down(num: int, den: int) -> int:
    # nearest integer to num/den (den > 0); exact halves go toward -inf
    return -((-2 * num + den) // (2 * den))


def nearest_quotient(x: GaussianInt, y: GaussianInt) -> GaussianInt:
    """Nearest Gaussian integer to ``x / y``, ties toward -inf in each coordinate."""
    n = y.norm()
    num = x * y.conjugate()
    return GaussianInt(_round_half_down(num.re, n), _round_half_down(num.im, n))


def ggcd(x: IntLike, y: IntLike) -> GaussianInt:
    """Standard generator of the ideal ``(x, y)``; ``ggcd(0, 0) == 0``."""
    a, b = GaussianInt.coerce(x), GaussianInt.coerce(y)
    while b:
        a, b = b, a - nearest_quotient(a, b) * b
    if not a:
        return ZERO
    return standard_associate(a)[1]


def ext_ggcd(x: IntLike, y: IntLike) -> tuple[GaussianInt, GaussianInt, GaussianInt]:
    """Return ``(g, z, w)`` with ``x*z - y*w == g == ggcd(x, y)``."""
    x, y = GaussianInt.coerce(x), GaussianInt.coerce(y)
    if not x and not y:
        raise DomainError("ext_ggcd(0, 0) has no certificate")
    # invariant: r0 = x*s0 + y*t0, r1 = x*s1 + y*t1
    r0, s0, t0 = x, ONE, ZERO
    r1, s1, t1 = y, ZERO, ONE
    while r1:
        q = nearest_quotient(r0, r1)
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    j, g = standard_associate(r0)
    u = unit(j)
    return g, s0 * u, -(t0 * u)


def hermite_box(y: IntLike) -> tuple[int, int, GaussianInt]:
    """Triangular basis ``(h11, h22, t)`` of the Z-lattice ``y*Z[i]``.

    The lattice is ``Z*h11 + Z*(t + h22*i)`` with ``0 <= t.re < h11`` and
    ``t.im == h22``.
    """
    y = GaussianInt.coerce(y)
    if not y:
        raise DomainError("zero modulus")
    a, b = abs(y.re), abs(y.im)
    g = math.gcd(a, b)
    h11 = y.norm() // g
    # y*(u + v*i) has imaginary part u*y.im + v*y.re; solve it equal to g
    _, u, v = _int_ext_gcd(y.im, y.re)
    t = y * GaussianInt(u, v)
    assert t.im == g
    return h11, g, GaussianInt(t.re % h11, g)


def _int_ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    """Integer extended gcd: ``(g, u, v)`` with ``a*u + b*v == g >= 0``."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        return -old_r, -old_s, -old_t
    return old_r, old_s, old_t


@dataclass(frozen=True)
class ResidueSystem:
    modulus: GaussianInt
    reps: tuple[GaussianInt, ...]

    def __len__(self):
        return len(self.reps)

    def __contains__(self, z):
        return GaussianInt.coerce(z) in set(self.reps)


def omega_reps(y: IntLike) -> ResidueSystem:
    """Box representatives ``{a + b*i : 0 <= a < h11, 0 <= b < h22}`` of Z[i]/(y).

    For ``y`` an associate of ``(1+i)**n`` this is the box
    ``0 <= r < 2**ceil(n/2)``, ``0 <= s < 2**(n - ceil(n/2))``.
    """
    y = GaussianInt.coerce(y)
    h11, h22, _ = hermite_box(y)
    reps = tuple(GaussianInt(a, b) for b in range(h22) for a in range(h11))
    return ResidueSystem(y, reps)


def reduce_mod(x: IntLike, y: IntLike) -> GaussianInt:
    """The representative of ``x mod y`` inside ``omega_reps(y)``."""
    x = GaussianInt.coerce(x)
    h11, h22, t = hermite_box(y)
    k = x.im // h22
    x = x - t * k
    return GaussianInt(x.re % h11, x.im)


# ---------------------------------------------------------------------------
# Z[w8, 1/(1+i)]
# ---------------------------------------------------------------------------

_SQRT_HALF = math.sqrt(0.5)
_OMEGA_C = complex(_SQRT_HALF, _SQRT_HALF)
_INV_ONE_PLUS_I_C = complex(0.5, -0.5)


def _halve_by_one_plus_i(z: GaussianInt) -> GaussianInt:
    # z / (1+i) = z * (1-i) / 2, caller guarantees divisibility
    return GaussianInt((z.re + z.im) // 2, (z.im - z.re) // 2)


def _div_by_one_plus_i_ok(z: GaussianInt) -> bool:
    return (z.re + z.im) % 2 == 0


class CycloNum:
    """Exact element ``(u + v*w8) / (1+i)**k`` of Z[w8, 1/(1+i)]."""

    __slots__ = ("u", "v", "k")

    def __init__(self, u: IntLike = 0, v: IntLike = 0, k: int = 0):
        u = GaussianInt.coerce(u)
        v = GaussianInt.coerce(v)
        if k < 0:
            # multiply numerator by (1+i)**(-k)
            f = ONE_PLUS_I ** (-k)
            u, v, k = u * f, v * f, 0
        while k > 0 and _div_by_one_plus_i_ok(u) and _div_by_one_plus_i_ok(v):
            u, v, k = _halve_by_one_plus_i(u), _halve_by_one_plus_i(v), k - 1
        self.u = u
        self.v = v
        self.k = k

    @classmethod
    def coerce(cls, value) -> "CycloNum":
        if isinstance(value, CycloNum):
            return value
        if isinstance(value, (int, GaussianInt, str)):
            return cls(GaussianInt.coerce(value))
        raise TypeError(f"cannot convert {type(value).__name__} to CycloNum")

    def _lift(self, k: int) -> tuple[GaussianInt, GaussianInt]:
        f = ONE_PLUS_I ** (k - self.k)
        return self.u * f, self.v * f

    def __add__(self, other):
        if not isinstance(other, CycloNum):
            if isinstance(other, (int, GaussianInt)):
                other = CycloNum(other)
            else:
                return NotImplemented
        k = max(self.k, other.k)
        u1, v1 = self._lift(k)
        u2, v2 = other._lift(k)
        return CycloNum(u1 + u2, v1 + v2, k)

    __radd__ = __add__

    def __neg__(self):
        return CycloNum(-self.u, -self.v, self.k)

    def __sub__(self, other):
        if not isinstance(other, CycloNum):
            if isinstance(other, (int, GaussianInt)):
                other = CycloNum(other)
            else:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, GaussianInt)):
            return CycloNum(self.u * other, self.v * other, self.k)
        if not isinstance(other, CycloNum):
            return NotImplemented
        u1, v1, u2, v2 = self.u, self.v, other.u, other.v
        # (u1 + v1 w)(u2 + v2 w) = (u1 u2 + i v1 v2) + (u1 v2 + u2 v1) w
        return CycloNum(u1 * u2 + I * (v1 * v2), u1 * v2 + u2 * v1, self.k + other.k)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = CycloNum(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, GaussianInt)):
            other = CycloNum(other)
        if not isinstance(other, CycloNum):
            return NotImplemented
        return self.k == other.k and self.u == other.u and self.v == other.v

    def __hash__(self):
        return hash((self.u, self.v, self.k))

    def __bool__(self):
        return bool(self.u or self.v)

    def __repr__(self):
        return f"CycloNum({self.u!s}, {self.v!s}, k={self.k})"

    def __str__(self):
        if self.k == 0 and not self.v:
            return str(self.u)
        return f"({self.u}+({self.v})w8)/(1+i)^{self.k}"

    def div_one_plus_i(self) -> "CycloNum":
        return CycloNum(self.u, self.v, self.k + 1)

    def half(self) -> "CycloNum":
        # 1/2 = i / (1+i)**2
        return CycloNum(self.u * I, self.v * I, self.k + 2)

    def is_gaussian_int(self) -> bool:
        return self.k == 0 and not self.v

    def to_gaussian(self) -> GaussianInt:
        if not self.is_gaussian_int():
            raise DomainError(f"{self} is not a Gaussian integer")
        return self.u

    def conjugate(self) -> "CycloNum":
        """Complex conjugate (``conj(w8) = -i*w8``, ``conj(1+i) = -i*(1+i)``)."""
        u, v = self.u.conjugate(), self.v.conjugate() * GaussianInt(0, -1)
        f = unit(self.k)
        return CycloNum(u * f, v * f, self.k)

    def is_real(self) -> bool:
        return self == self.conjugate()

    def field_norm_sq(self) -> "CycloNum":
        return self * self.conjugate()

    def inverse(self) -> "CycloNum":
        """Inverse inside the ring; only defined for units of Z[w8, 1/(1+i)]."""
        if not self:
            raise DomainError("division by zero")
        # w8 has norm 1 over Q(i); (u + v w)(u - v w) = u^2 - i v^2
        n = self.u * self.u - I * (self.v * self.v)
        num = CycloNum(self.u, -self.v, 0) * CycloNum(ONE_PLUS_I ** self.k)
        # n = unit * (1+i)**e is required for the inverse to stay in the ring
        e = 0
        m = n
        while _div_by_one_plus_i_ok(m) and m:
            m = _halve_by_one_plus_i(m)
            e += 1
        if m.norm() != 1:
            raise DomainError(f"{self} is not a unit of Z[w8, 1/(1+i)]")
        inv_unit = m.conjugate()  # m is a unit, so 1/m = conj(m)
        return CycloNum(num.u * inv_unit, num.v * inv_unit, num.k + e)

    def to_complex(self) -> complex:
        val = complex(self.u.re, self.u.im) + complex(self.v.re, self.v.im) * _OMEGA_C
        return val * _INV_ONE_PLUS_I_C ** self.k

    def to_json(self) -> dict:
        return {"u": str(self.u), "v": str(self.v), "k": self.k}

    @classmethod
    def from_json(cls, data) -> "CycloNum":
        if isinstance(data, (str, int)):
            return cls(GaussianInt.coerce(data if isinstance(data, int) else parse_gaussian(data)))
        if isinstance(data, dict):
            return cls(parse_gaussian(str(data["u"])), parse_gaussian(str(data.get("v", "0"))), int(data.get("k", 0)))
        raise DomainError(f"not a cyclotomic literal: {data!r}")


OMEGA8 = CycloNum(0, 1, 0)
OMEGA8_INV = CycloNum(0, GaussianInt(0, -1), 0)
INV_SQRT2 = CycloNum(0, 1, 1)  # w8 / (1+i)
SQRT2 = CycloNum(0, GaussianInt(1, -1), 0)  # w8 * (1-i)
INV_ONE_PLUS_I = CycloNum(1, 0, 1)

assert INV_SQRT2 * INV_SQRT2 == CycloNum(1).half()
assert SQRT2 * INV_SQRT2 == CycloNum(1)

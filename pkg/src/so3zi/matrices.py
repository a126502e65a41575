"""2x2 and 3x3 matrices over Z[w8, 1/(1+i)]."""
from __future__ import annotations

from typing import Iterable, Sequence

from .errors import DomainError
from .gaussian import CycloNum, GaussianInt


def _c(x) -> CycloNum:
    return CycloNum.coerce(x)


class Mat2:
    """Row-major ``[[a, b], [c, d]]`` with exact entries."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a, b, c, d):
        self.a, self.b, self.c, self.d = _c(a), _c(b), _c(c), _c(d)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "Mat2":
        (a, b), (c, d) = rows
        return cls(a, b, c, d)

    @classmethod
    def identity(cls) -> "Mat2":
        return cls(1, 0, 0, 1)

    def entries(self) -> tuple[CycloNum, CycloNum, CycloNum, CycloNum]:
        return self.a, self.b, self.c, self.d

    def rows(self):
        return [[self.a, self.b], [self.c, self.d]]

    def __mul__(self, other):
        if isinstance(other, Mat2):
            a, b, c, d = self.a, self.b, self.c, self.d
            e, f, g, h = other.a, other.b, other.c, other.d
            return Mat2(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)
        if isinstance(other, (int, GaussianInt, CycloNum)):
            return Mat2(self.a * other, self.b * other, self.c * other, self.d * other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, GaussianInt, CycloNum)):
            return self * other
        return NotImplemented

    def __neg__(self):
        return Mat2(-self.a, -self.b, -self.c, -self.d)

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = Mat2.identity()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, Mat2):
            return NotImplemented
        return self.entries() == other.entries()

    def __hash__(self):
        return hash(self.entries())

    def __repr__(self):
        return f"Mat2([[{self.a!s}, {self.b!s}], [{self.c!s}, {self.d!s}]])"

    def det(self) -> CycloNum:
        return self.a * self.d - self.b * self.c

    def is_sl2(self) -> bool:
        return self.det() == CycloNum(1)

    def is_gaussian(self) -> bool:
        return all(x.is_gaussian_int() for x in self.entries())

    def is_real(self) -> bool:
        return all(x.is_real() for x in self.entries())

    def adjugate(self) -> "Mat2":
        return Mat2(self.d, -self.b, -self.c, self.a)

    def inverse(self) -> "Mat2":
        """Inverse of a determinant-one matrix (the adjugate)."""
        if not self.is_sl2():
            raise DomainError("inverse is only provided for determinant one")
        return self.adjugate()

    def gaussian_entries(self) -> tuple[GaussianInt, GaussianInt, GaussianInt, GaussianInt]:
        if not self.is_gaussian():
            raise DomainError("matrix has non-Gaussian entries")
        return tuple(x.u for x in self.entries())  # type: ignore[return-value]

    def to_complex(self) -> tuple[complex, complex, complex, complex]:
        return tuple(x.to_complex() for x in self.entries())  # type: ignore[return-value]

    def to_json(self) -> dict:
        return {"rows": [[_entry_json(self.a), _entry_json(self.b)],
                         [_entry_json(self.c), _entry_json(self.d)]]}

    @classmethod
    def from_json(cls, data) -> "Mat2":
        rows = data["rows"] if isinstance(data, dict) else data
        if len(rows) != 2 or any(len(r) != 2 for r in rows):
            raise DomainError("Mat2 JSON needs two rows of two entries")
        return cls(*(CycloNum.from_json(x) for r in rows for x in r))


def _entry_json(x: CycloNum):
    # Gaussian entries use the short literal form; others the full object
    if x.is_gaussian_int():
        return str(x.u)
    return x.to_json()


def red2(g: Mat2) -> tuple[int, int, int, int]:
    """Entrywise residue mod (1+i), identifying Z[i]/(1+i) with {0, 1}."""
    return tuple((z.re + z.im) % 2 for z in g.gaussian_entries())  # type: ignore[return-value]


class Mat3:
    """3x3 matrix over Z[w8, 1/(1+i)], stored row-major."""

    __slots__ = ("m",)

    def __init__(self, rows: Iterable[Iterable]):
        self.m = tuple(tuple(_c(x) for x in row) for row in rows)
        if len(self.m) != 3 or any(len(r) != 3 for r in self.m):
            raise DomainError("Mat3 needs a 3x3 array")

    @classmethod
    def identity(cls) -> "Mat3":
        return cls([[1 if i == j else 0 for j in range(3)] for i in range(3)])

    def __getitem__(self, ij):
        i, j = ij
        return self.m[i][j]

    def __mul__(self, other: "Mat3") -> "Mat3":
        if not isinstance(other, Mat3):
            return NotImplemented
        a, b = self.m, other.m
        return Mat3([[sum((a[i][k] * b[k][j] for k in range(3)), CycloNum(0))
                      for j in range(3)] for i in range(3)])

    def __eq__(self, other):
        if not isinstance(other, Mat3):
            return NotImplemented
        return self.m == other.m

    def __hash__(self):
        return hash(self.m)

    def __repr__(self):
        return "Mat3(" + repr([[str(x) for x in row] for row in self.m]) + ")"

    def transpose(self) -> "Mat3":
        return Mat3([[self.m[j][i] for j in range(3)] for i in range(3)])

    def det(self) -> CycloNum:
        m = self.m
        return (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
                - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]))

    def is_gaussian(self) -> bool:
        return all(x.is_gaussian_int() for row in self.m for x in row)

    def is_rational_integral(self) -> bool:
        return all(x.is_gaussian_int() and x.u.im == 0 for row in self.m for x in row)

    def is_special_orthogonal(self) -> bool:
        """``M^T M == I`` and ``det M == 1``, transpose without conjugation."""
        return self.transpose() * self == Mat3.identity() and self.det() == CycloNum(1)

    def preserves(self, gram: "Mat3") -> bool:
        return self.transpose() * gram * self == gram

    def to_complex(self) -> list[list[complex]]:
        return [[x.to_complex() for x in row] for row in self.m]

    def to_json(self) -> dict:
        return {"rows": [[_entry_json(x) for x in row] for row in self.m]}

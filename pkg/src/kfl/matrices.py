"""Exact dense matrices over the integers (or rationals).

Entries are plain Python ints or fractions.Fraction; nothing here ever
touches floating point.  Rank and determinant use fraction-free Bareiss
elimination, so certificates derived from them are exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


def xgcd(a, b):
    """Extended gcd: returns (g, x, y) with g = a*x + b*y and g >= 0."""
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def _exact_div(a, b):
    if isinstance(a, int) and isinstance(b, int):
        q, r = divmod(a, b)
        if r:
            raise ArithmeticError("non-exact division in fraction-free elimination")
        return q
    return Fraction(a) / Fraction(b)


@dataclass(frozen=True)
class Matrix:
    """Immutable matrix stored as a tuple of row tuples."""

    rows: tuple[tuple, ...]

    def __post_init__(self):
        rows = tuple(tuple(r) for r in self.rows)
        object.__setattr__(self, "rows", rows)
        if rows:
            n = len(rows[0])
            if any(len(r) != n for r in rows):
                raise ValueError("ragged rows")

    @classmethod
    def identity(cls, n):
        return cls(tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)))

    @classmethod
    def zeros(cls, nrows, ncols):
        return cls(tuple((0,) * ncols for _ in range(nrows)))

    @classmethod
    def block_diag(cls, blocks):
        n = sum(b.nrows for b in blocks)
        m = sum(b.ncols for b in blocks)
        rows = [[0] * m for _ in range(n)]
        r0 = c0 = 0
        for b in blocks:
            for i, row in enumerate(b.rows):
                rows[r0 + i][c0 : c0 + b.ncols] = row
            r0 += b.nrows
            c0 += b.ncols
        return cls(tuple(tuple(r) for r in rows))

    @property
    def nrows(self):
        return len(self.rows)

    @property
    def ncols(self):
        return len(self.rows[0]) if self.rows else 0

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __mul__(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch: {self.shape} * {other.shape}")
        cols = tuple(zip(*other.rows))
        return Matrix(
            tuple(
                tuple(sum(a * b for a, b in zip(row, col)) for col in cols)
                for row in self.rows
            )
        )

    def __add__(self, other):
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return Matrix(
            tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows))
        )

    def __sub__(self, other):
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return Matrix(
            tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows))
        )

    def __neg__(self):
        return Matrix(tuple(tuple(-a for a in r) for r in self.rows))

    def scale(self, s):
        return Matrix(tuple(tuple(s * a for a in r) for r in self.rows))

    def transpose(self):
        return Matrix(tuple(zip(*self.rows)))

    def max_abs(self):
        return max((abs(a) for r in self.rows for a in r), default=0)

    def is_zero(self):
        return all(a == 0 for r in self.rows for a in r)

    def rank(self):
        """Exact rank via fraction-free (Bareiss) elimination."""
        m = [list(r) for r in self.rows]
        nr, nc = self.nrows, self.ncols
        prev = 1
        r = 0
        for c in range(nc):
            if r == nr:
                break
            piv = next((i for i in range(r, nr) if m[i][c] != 0), None)
            if piv is None:
                continue
            if piv != r:
                m[r], m[piv] = m[piv], m[r]
            for i in range(r + 1, nr):
                for j in range(c + 1, nc):
                    m[i][j] = _exact_div(m[i][j] * m[r][c] - m[i][c] * m[r][j], prev)
                m[i][c] = 0
            prev = m[r][c]
            r += 1
        return r

    def det(self):
        """Exact determinant via Bareiss elimination."""
        if self.nrows != self.ncols:
            raise ValueError("determinant of a non-square matrix")
        n = self.nrows
        if n == 0:
            return 1
        m = [list(r) for r in self.rows]
        sign = 1
        prev = 1
        for c in range(n - 1):
            piv = next((i for i in range(c, n) if m[i][c] != 0), None)
            if piv is None:
                return 0
            if piv != c:
                m[c], m[piv] = m[piv], m[c]
                sign = -sign
            for i in range(c + 1, n):
                for j in range(c + 1, n):
                    m[i][j] = _exact_div(m[i][j] * m[c][c] - m[i][c] * m[c][j], prev)
                m[i][c] = 0
            prev = m[c][c]
        return sign * m[n - 1][n - 1]

    def to_lists(self):
        return [list(r) for r in self.rows]

    def __repr__(self):
        return f"Matrix({self.to_lists()})"

"""Dense matrices of exact rationals.

Determinant and rank use fraction-free (Bareiss) elimination on an
integer rescaling of the rows; inversion is Gauss-Jordan over
:class:`fractions.Fraction`.  Matrices here are small (at most ~10 x 10).
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import AlgebraError, ParseError

Number = Fraction | int


class RationalMatrix:
    __slots__ = ("rows", "cols", "_data")

    def __init__(self, data: Iterable[Iterable[Number | str]]):
        rows = [tuple(Fraction(x) for x in row) for row in data]
        if rows and any(len(r) != len(rows[0]) for r in rows):
            raise AlgebraError("ragged matrix")
        self._data: tuple[tuple[Fraction, ...], ...] = tuple(rows)
        self.rows = len(rows)
        self.cols = len(rows[0]) if rows else 0

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, r: int, c: int) -> "RationalMatrix":
        return cls([[0] * c for _ in range(r)])

    def __getitem__(self, idx: tuple[int, int]) -> Fraction:
        i, j = idx
        return self._data[i][j]

    def tolist(self) -> list[list[Fraction]]:
        return [list(r) for r in self._data]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        return self._data == other._data

    def __hash__(self) -> int:
        return hash(self._data)

    def __repr__(self) -> str:
        return f"RationalMatrix({[[str(x) for x in r] for r in self._data]})"

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix(zip(*self._data)) if self.rows else RationalMatrix([])

    def is_symmetric(self) -> bool:
        return self.is_square and all(
            self._data[i][j] == self._data[j][i] for i in range(self.rows) for j in range(i)
        )

    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.cols != other.rows:
            raise AlgebraError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        ot = list(zip(*other._data)) if other.rows else [() for _ in range(other.cols)]
        return RationalMatrix(
            [[sum((a * b for a, b in zip(row, col)), Fraction(0)) for col in ot] for row in self._data]
        )

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "RationalMatrix":
        for r in rows:
            if not 0 <= r < self.rows:
                raise AlgebraError(f"row index {r} out of range")
        for c in cols:
            if not 0 <= c < self.cols:
                raise AlgebraError(f"column index {c} out of range")
        return RationalMatrix([[self._data[r][c] for c in cols] for r in rows])

    # -- fraction-free kernels ----------------------------------------------------

    def _integer_rows(self) -> tuple[list[list[int]], int]:
        """Rows scaled to integers, and the product of the row scale factors."""
        out, scale = [], 1
        for row in self._data:
            m = math.lcm(*(x.denominator for x in row)) if row else 1
            out.append([int(x * m) for x in row])
            scale *= m
        return out, scale

    def det(self) -> Fraction:
        if not self.is_square:
            raise AlgebraError("determinant of a non-square matrix")
        n = self.rows
        if n == 0:
            return Fraction(1)
        m, scale = self._integer_rows()
        sign = 1
        prev = 1
        for k in range(n - 1):
            if m[k][k] == 0:
                swap = next((r for r in range(k + 1, n) if m[r][k] != 0), None)
                if swap is None:
                    return Fraction(0)
                m[k], m[swap] = m[swap], m[k]
                sign = -sign
            pivot = m[k][k]
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    m[i][j] = (m[i][j] * pivot - m[i][k] * m[k][j]) // prev
                m[i][k] = 0
            prev = pivot
        return Fraction(sign * m[n - 1][n - 1], scale)

    def rank(self) -> int:
        m, _ = self._integer_rows()
        rows, cols = self.rows, self.cols
        r = 0
        prev = 1
        for c in range(cols):
            if r == rows:
                break
            piv = next((i for i in range(r, rows) if m[i][c] != 0), None)
            if piv is None:
                continue
            m[r], m[piv] = m[piv], m[r]
            pivot = m[r][c]
            for i in range(r + 1, rows):
                for j in range(c + 1, cols):
                    m[i][j] = (m[i][j] * pivot - m[i][c] * m[r][j]) // prev
                m[i][c] = 0
            prev = pivot
            r += 1
        return r

    def inverse(self) -> "RationalMatrix":
        if not self.is_square:
            raise AlgebraError("inverse of a non-square matrix")
        n = self.rows
        aug = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(self._data)]
        for c in range(n):
            piv = next((r for r in range(c, n) if aug[r][c] != 0), None)
            if piv is None:
                raise AlgebraError("matrix is singular")
            aug[c], aug[piv] = aug[piv], aug[c]
            inv_p = 1 / aug[c][c]
            aug[c] = [x * inv_p for x in aug[c]]
            for r in range(n):
                if r != c and aug[r][c] != 0:
                    f = aug[r][c]
                    aug[r] = [x - f * y for x, y in zip(aug[r], aug[c])]
        return RationalMatrix(row[n:] for row in aug)

    def minor(self, rows: Sequence[int], cols: Sequence[int]) -> Fraction:
        """Determinant of the submatrix with the given rows and columns, in that order."""
        if len(rows) != len(cols):
            raise AlgebraError("minor needs equally many rows and columns")
        return self.submatrix(rows, cols).det()

    def leading_principal_minors(self) -> list[Fraction]:
        return [self.minor(range(k), range(k)) for k in range(1, self.rows + 1)]

    def is_positive_definite(self) -> bool:
        return self.is_symmetric() and all(d > 0 for d in self.leading_principal_minors())

    # -- serialisation -------------------------------------------------------------

    def to_strings(self) -> list[list[str]]:
        return [[str(x) for x in row] for row in self._data]

    @classmethod
    def from_strings(cls, data: Sequence[Sequence[str | int]]) -> "RationalMatrix":
        try:
            return cls([[Fraction(str(x)) for x in row] for row in data])
        except (ValueError, ZeroDivisionError, TypeError) as exc:
            raise ParseError(f"bad matrix entry: {exc}") from None


def det_cofactor(m: RationalMatrix) -> Fraction:
    """Laplace expansion along the first row; the independent check on ``det``."""
    if not m.is_square:
        raise AlgebraError("determinant of a non-square matrix")
    data = m.tolist()

    def rec(rows: tuple[int, ...], cols: tuple[int, ...]) -> Fraction:
        if not rows:
            return Fraction(1)
        r0, rest = rows[0], rows[1:]
        total = Fraction(0)
        for k, c in enumerate(cols):
            if data[r0][c]:
                sub = rec(rest, cols[:k] + cols[k + 1:])
                total += (-1) ** k * data[r0][c] * sub
        return total

    return rec(tuple(range(m.rows)), tuple(range(m.cols)))


def permutation_sign(perm: Sequence[int]) -> int:
    sign = 1
    for x, y in itertools.combinations(range(len(perm)), 2):
        if perm[x] > perm[y]:
            sign = -sign
    return sign

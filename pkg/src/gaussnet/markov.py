"""d-separation and the determinantal constraints of conditional independence.

A statement ``A _||_ B | C`` holds for a Gaussian vector exactly when the
submatrix of the covariance with rows ``A u C`` and columns ``B u C`` has
rank at most ``|C|``, so its ``(|C|+1)``-minors are the polynomial
constraints attached to the statement.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import GraphError
from .graph import Dag
from .linalg import RationalMatrix, permutation_sign
from .polynomial import Poly, covariance

VertexSet = frozenset[int]


@dataclass(frozen=True)
class CiStatement:
    A: VertexSet
    B: VertexSet
    C: VertexSet = frozenset()

    @classmethod
    def of(cls, A: Iterable[int], B: Iterable[int], C: Iterable[int] = ()) -> "CiStatement":
        """Canonical statement: sets disjoint, A and B nonempty, min(A) < min(B)."""
        a, b, c = frozenset(A), frozenset(B), frozenset(C)
        if not a or not b:
            raise GraphError("A and B must be nonempty")
        if a & b or a & c or b & c:
            raise GraphError("A, B and C must be pairwise disjoint")
        if min(b) < min(a):
            a, b = b, a
        return cls(a, b, c)

    def sort_key(self) -> tuple:
        return (
            len(self.A), len(self.B), len(self.C),
            tuple(sorted(self.A)), tuple(sorted(self.B)), tuple(sorted(self.C)),
        )

    def row_indices(self) -> list[int]:
        return sorted(self.A) + sorted(self.C)

    def col_indices(self) -> list[int]:
        return sorted(self.B) + sorted(self.C)

    def __str__(self) -> str:
        def fmt(s: VertexSet) -> str:
            return "{" + ",".join(str(v) for v in sorted(s)) + "}"

        return f"{fmt(self.A)} _||_ {fmt(self.B)} | {fmt(self.C)}"


def _check_disjoint(A: set[int], B: set[int], C: set[int]) -> None:
    if A & B or A & C or B & C:
        raise GraphError("A, B and C must be pairwise disjoint")


def d_separated(g: Dag, A: Iterable[int], B: Iterable[int], C: Iterable[int] = ()) -> bool:
    """True iff C blocks every path between A and B.

    Reachability over (vertex, direction-of-entry) states: a ball entering a
    vertex from a child ("up") or from a parent ("down") may continue only as
    the blocking rules allow.
    """
    A, B, C = set(A), set(B), set(C)
    g.check_vertices(A | B | C)
    _check_disjoint(A, B, C)
    if not A or not B:
        return True
    # vertices with a descendant in C (including C itself) open colliders
    opens: set[int] = set()
    for c in C:
        opens |= g.ancestors(c)
    UP, DOWN = 0, 1
    queue = deque((x, UP) for x in A)
    seen: set[tuple[int, int]] = set()
    while queue:
        v, direction = queue.popleft()
        if (v, direction) in seen:
            continue
        seen.add((v, direction))
        if v in B:
            return False
        if direction == UP:
            if v in C:
                continue
            queue.extend((p, UP) for p in g.parents(v))
            queue.extend((c, DOWN) for c in g.children(v))
        else:
            if v not in C:
                queue.extend((c, DOWN) for c in g.children(v))
            if v in opens:
                queue.extend((p, UP) for p in g.parents(v))
    return True


def _subsets(items: Sequence[int], lo: int, hi: int) -> Iterable[tuple[int, ...]]:
    for k in range(lo, hi + 1):
        yield from itertools.combinations(items, k)


def enumerate_ci_statements(g: Dag, amax: int = 2, cmax: int = 3) -> list[CiStatement]:
    """Every canonical d-separation statement with |A|, |B| <= amax and |C| <= cmax."""
    if amax < 1 or cmax < 0:
        raise GraphError("need amax >= 1 and cmax >= 0")
    verts = list(g.vertices)
    out = []
    for A in _subsets(verts, 1, amax):
        rest = [v for v in verts if v not in A]
        for B in _subsets(rest, 1, amax):
            if min(B) < min(A):
                continue
            remaining = [v for v in rest if v not in B]
            for C in _subsets(remaining, 0, cmax):
                if d_separated(g, A, B, C):
                    out.append(CiStatement(frozenset(A), frozenset(B), frozenset(C)))
    out.sort(key=CiStatement.sort_key)
    return out


def symbolic_minor(rows: Sequence[int], cols: Sequence[int]) -> Poly:
    """Determinant of the symbolic covariance submatrix, rows/columns in the given order."""
    k = len(rows)
    total: dict[tuple[int, ...], int] = {}
    for perm in itertools.permutations(range(k)):
        mono = tuple(sorted(covariance(rows[r], cols[perm[r]]).code for r in range(k)))
        total[mono] = total.get(mono, 0) + permutation_sign(perm)
    return Poly(total)


def ci_minor_polynomials(stmt: CiStatement) -> list[Poly]:
    """All (|C|+1)-minors of S[A u C, B u C], in lexicographic row-set/column-set order."""
    rows, cols = stmt.row_indices(), stmt.col_indices()
    k = len(stmt.C) + 1
    out = []
    for rsel in itertools.combinations(range(len(rows)), k):
        for csel in itertools.combinations(range(len(cols)), k):
            p = symbolic_minor([rows[r] for r in rsel], [cols[c] for c in csel])
            if not p.is_zero():
                out.append(p)
    return out


def ci_rank_test(cov: RationalMatrix, stmt: CiStatement) -> bool:
    """True iff rank S[A u C, B u C] <= |C| for the numeric covariance ``cov``."""
    rows = [v - 1 for v in stmt.row_indices()]
    cols = [v - 1 for v in stmt.col_indices()]
    return cov.submatrix(rows, cols).rank() <= len(stmt.C)

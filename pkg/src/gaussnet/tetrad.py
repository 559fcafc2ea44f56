"""Choke points, vanishing tetrads and the substitution membership test."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import AlgebraError, GraphError
from .graph import Dag
from .polynomial import SIGMA, Poly, poly_sum, sigma, substitute_sigma
from .treks import Trek, enumerate_treks, trek_rule_map, trek_rule_sigma

I_SIDE, J_SIDE, BOTH = "I", "J", "both"


@dataclass(frozen=True)
class ChokeReport:
    """Choke points as ``(vertex, side)`` pairs in trek-traversal order (I end first)."""

    points: tuple[tuple[int, str], ...]
    trivially_vanishing: bool

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(v for v, _ in self.points)

    def __bool__(self) -> bool:
        return bool(self.points)


def treks_between(g: Dag, I: Iterable[int], J: Iterable[int]) -> list[Trek]:
    out = []
    for i in sorted(set(I)):
        for j in sorted(set(J)):
            out.extend(enumerate_treks(g, i, j))
    return out


def choke_points(g: Dag, I: Iterable[int], J: Iterable[int]) -> ChokeReport:
    """Vertices lying on every trek from I to J, always on the I side or always on the J side.

    The I side of a trek is its path from the top down to the I endpoint,
    top included; likewise for J, so a top sits on both sides.
    """
    I, J = set(I), set(J)
    if not I or not J:
        raise GraphError("I and J must be nonempty")
    g.check_vertices(I | J)
    treks = treks_between(g, I, J)
    if not treks:
        return ChokeReport((), True)
    on_i = set(treks[0].left)
    on_j = set(treks[0].right)
    for t in treks[1:]:
        on_i &= set(t.left)
        on_j &= set(t.right)
    points = []
    for v in treks[0].vertices():
        if v in on_i and v in on_j:
            points.append((v, BOTH))
        elif v in on_i:
            points.append((v, I_SIDE))
        elif v in on_j:
            points.append((v, J_SIDE))
    return ChokeReport(tuple(points), False)


def tetrad(i: int, j: int, k: int, l: int) -> Poly:
    """s(i,j)*s(k,l) - s(i,l)*s(j,k)."""
    return sigma(i, j) * sigma(k, l) - sigma(i, l) * sigma(j, k)


def connected_by_trek(g: Dag, i: int, j: int) -> bool:
    """A trek exists iff the two vertices share an ancestor."""
    return not g.ancestors(i).isdisjoint(g.ancestors(j))


def tetrad_vanishes(g: Dag, i: int, j: int, k: int, l: int) -> bool:
    """Decide whether ``tetrad(i, j, k, l)`` lies in the vanishing ideal of ``g``.

    When some factor is identically zero the binomial vanishes iff both
    products do.  Otherwise it vanishes iff there is a choke point between
    {i, k} and {j, l}.
    """
    g.check_vertices((i, j, k, l))
    first = connected_by_trek(g, i, j) and connected_by_trek(g, k, l)
    second = connected_by_trek(g, i, l) and connected_by_trek(g, j, k)
    if not (first and second):
        return first == second
    return bool(choke_points(g, {i, k}, {j, l}))


def _pairs(indices: Sequence[int], repeats: bool) -> Iterable[tuple[tuple[int, int], tuple[int, int]]]:
    """Unordered pairs {I, J} of 2-subsets; with ``repeats=False`` only disjoint ones."""
    if not repeats:
        for p, q, r, s in itertools.combinations(indices, 4):
            yield (p, q), (r, s)
            yield (p, r), (q, s)
            yield (p, s), (q, r)
        return
    two = list(itertools.combinations(indices, 2))
    for x, y in itertools.combinations_with_replacement(range(len(two)), 2):
        yield two[x], two[y]


def all_vanishing_tetrads(
    g: Dag,
    indices: Sequence[int] | None = None,
    repeats: bool = False,
    skip_trivial: bool = False,
) -> list[Poly]:
    """Tetrads accepted by :func:`tetrad_vanishes`, one per choke split, sign-normalised.

    By default every 4-subset of vertices with its three pairings is tried;
    ``repeats=True`` also allows the two index pairs to share indices.
    ``skip_trivial`` drops binomials containing an identically zero
    variable; those already lie in the ideal of the linear generators.
    """
    idx = sorted(set(indices)) if indices is not None else list(g.vertices)
    g.check_vertices(idx)
    out: list[Poly] = []
    seen: set[Poly] = set()
    for (i, k), (j, l) in _pairs(idx, repeats):
        if skip_trivial and not all(
            connected_by_trek(g, u, v) for u, v in ((i, j), (k, l), (i, l), (j, k))
        ):
            continue
        if not tetrad_vanishes(g, i, j, k, l):
            continue
        b = tetrad(i, j, k, l).normalized_sign()
        if not b.is_zero() and b not in seen:
            seen.add(b)
            out.append(b)
    return out


# -- membership -------------------------------------------------------------------


def verify_vanishing(g: Dag, p: Poly) -> bool:
    """True iff ``p`` maps to zero under the trek rule of ``g``."""
    for v in p.variables():
        if v.kind != SIGMA:
            raise AlgebraError(f"{v} is not a covariance variable")
        g.check_vertices((v.i, v.j))
    return substitute_sigma(p, trek_rule_map(g)).is_zero()


def determinant(entries: Sequence[Sequence[Poly]]) -> Poly:
    """Determinant of a square matrix of polynomials by memoised Laplace expansion."""
    k = len(entries)
    if any(len(row) != k for row in entries):
        raise AlgebraError("determinant of a non-square matrix")
    memo: dict[tuple[int, ...], Poly] = {(): Poly.const(1)}

    def rec(cols: tuple[int, ...]) -> Poly:
        # expands the last len(cols) rows over the given columns
        if cols in memo:
            return memo[cols]
        row = entries[k - len(cols)]
        parts = []
        for pos, c in enumerate(cols):
            if row[c].is_zero():
                continue
            sub = rec(cols[:pos] + cols[pos + 1:])
            if sub.is_zero():
                continue
            term = row[c] * sub
            parts.append(-term if pos % 2 else term)
        memo[cols] = poly_sum(parts)
        return memo[cols]

    return rec(tuple(range(k)))


def parametrized_minor(g: Dag, rows: Sequence[int], cols: Sequence[int]) -> Poly:
    """Image under the trek rule of the minor of the covariance matrix on ``rows`` x ``cols``."""
    if len(rows) != len(cols):
        raise AlgebraError("minor needs equally many rows and columns")
    return determinant([[trek_rule_sigma(g, r, c) for c in cols] for r in rows])


def minor_vanishes(g: Dag, rows: Sequence[int], cols: Sequence[int]) -> bool:
    """Same verdict as verify_vanishing on the expanded minor, computed without expanding it."""
    return parametrized_minor(g, rows, cols).is_zero()

"""Toric geometry of tree models.

For a tree every covariance entry is a single trek monomial, so the model
ideal is toric.  Its generators are the unconnected entries and the
vanishing tetrads; its polytope lives in coordinates ``x_i`` (one per
vertex) and ``y_ij`` (one per edge).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .errors import GraphError
from .graph import Dag, classify, components_after_edge_removal, connected_components
from .polynomial import Poly, sigma
from .tetrad import all_vanishing_tetrads, connected_by_trek
from .treks import enumerate_treks

Row = tuple[int, ...]


def _require_tree(t: Dag) -> None:
    if not classify(t).is_tree:
        raise GraphError("not a tree")


def _require_forest(t: Dag) -> None:
    if not classify(t).is_forest:
        raise GraphError("not a forest")


@dataclass(frozen=True)
class TreeGenerators:
    linear: tuple[Poly, ...]
    quadratic: tuple[Poly, ...]


def tree_ideal_generators(t: Dag) -> TreeGenerators:
    """Unconnected entries s(i,j) and the vanishing tetrads, repeated indices allowed.

    Tetrads containing an unconnected entry are left out: they are already
    multiples of the linear generators.
    """
    _require_forest(t)
    linear = tuple(
        sigma(i, j)
        for i in t.vertices
        for j in t.vertices
        if i < j and not connected_by_trek(t, i, j)
    )
    quadratic = tuple(all_vanishing_tetrads(t, repeats=True, skip_trivial=True))
    return TreeGenerators(linear, quadratic)


# -- polytope ----------------------------------------------------------------------


def coordinate_names(t: Dag) -> list[str]:
    return [f"x{i}" for i in t.vertices] + [f"y{i},{j}" for i, j in t.sorted_edges]


@dataclass(frozen=True)
class LinearSystem:
    """``coeffs . v == const`` for each equality and ``coeffs . v >= const`` for each inequality."""

    names: tuple[str, ...]
    equalities: tuple[tuple[Row, int], ...]
    inequalities: tuple[tuple[Row, int], ...]

    @property
    def dim(self) -> int:
        return len(self.names)

    def contains(self, point: Sequence[Fraction | int]) -> bool:
        if len(point) != self.dim:
            raise GraphError(f"point has {len(point)} coordinates, expected {self.dim}")

        def dot(row: Row) -> Fraction:
            return sum((c * Fraction(v) for c, v in zip(row, point)), Fraction(0))

        return all(dot(r) == c for r, c in self.equalities) and all(
            dot(r) >= c for r, c in self.inequalities
        )

    def format_row(self, row: Row) -> str:
        parts = []
        for c, name in zip(row, self.names):
            if not c:
                continue
            mag = "" if abs(c) == 1 else str(abs(c))
            if not parts:
                parts.append(f"{'-' if c < 0 else ''}{mag}{name}")
            else:
                parts.append(f" {'-' if c < 0 else '+'} {mag}{name}")
        return "".join(parts) or "0"

    def lines(self) -> list[str]:
        out = [f"{self.format_row(r)} >= {c}" for r, c in self.inequalities]
        eq = [f"{self.format_row(r)} = {c}" for r, c in self.equalities]
        # equalities sit between the nonnegativity block and the edge block
        nonneg = len(self.names)
        return out[:nonneg] + eq + out[nonneg:]

    def to_json(self) -> dict:
        return {
            "coordinates": list(self.names),
            "equalities": [{"coefficients": list(r), "rhs": c} for r, c in self.equalities],
            "inequalities": [{"coefficients": list(r), "rhs": c} for r, c in self.inequalities],
        }


def polytope_system(t: Dag) -> LinearSystem:
    """Nonnegativity, the simplex equation, one row per edge and one per vertex, in that order."""
    _require_tree(t)
    names = coordinate_names(t)
    dim = len(names)
    x = {i: i - 1 for i in t.vertices}
    y = {e: t.n + k for k, e in enumerate(t.sorted_edges)}

    def row(entries: dict[int, int]) -> Row:
        r = [0] * dim
        for pos, c in entries.items():
            r[pos] += c
        return tuple(r)

    ineq: list[tuple[Row, int]] = [(row({k: 1}), 0) for k in range(dim)]
    eq = [(row({x[i]: 1 for i in t.vertices}), 1)]
    for j, k in t.sorted_edges:
        entries = {x[j]: 1, y[(j, k)]: -1}
        for i in t.parents(j):
            entries[y[(i, j)]] = 1
        ineq.append((row(entries), 0))
    for j in t.vertices:
        entries = {x[j]: 2}
        for i in t.parents(j):
            entries[y[(i, j)]] = 1
        for k in t.children(j):
            entries[y[(j, k)]] = -1
        ineq.append((row(entries), 0))
    return LinearSystem(tuple(names), tuple(eq), tuple(ineq))


@dataclass(frozen=True)
class ExponentVector:
    pair: tuple[int, int]
    coords: Row


def exponent_vectors(t: Dag, allow_forest: bool = False) -> list[ExponentVector]:
    """Exponent vector of the trek monomial of every connected pair i <= j."""
    if allow_forest:
        _require_forest(t)
    else:
        _require_tree(t)
    dim = t.n + len(t.edges)
    y = {e: t.n + k for k, e in enumerate(t.sorted_edges)}
    out = []
    for i in t.vertices:
        for j in range(i, t.n + 1):
            treks = enumerate_treks(t, i, j)
            if not treks:
                continue
            (trek,) = treks
            v = [0] * dim
            v[trek.top - 1] = 1
            for e in trek.edges():
                v[y[e]] = 1
            out.append(ExponentVector((i, j), tuple(v)))
    return out


# -- degree ------------------------------------------------------------------------


def _downward_shape(t: Dag) -> tuple:
    """Canonical shape of a downward directed tree: nested sorted parent shapes from the sink."""

    def enc(v: int) -> tuple:
        return tuple(sorted(enc(p) for p in t.parents(v)))

    (sink,) = [v for v in t.vertices if not t.children(v)]
    return enc(sink)


def _shape_to_dag(shape: tuple) -> Dag:
    edges: list[tuple[int, int]] = []
    counter = [0]

    def build(s: tuple) -> int:
        # parents are numbered before their child
        kids = [build(c) for c in s]
        counter[0] += 1
        me = counter[0]
        edges.extend((k, me) for k in kids)
        return me

    build(shape)
    return Dag(counter[0], frozenset(edges))


@lru_cache(maxsize=None)
def _shape_degree(shape: tuple) -> int:
    if not shape:
        return 1
    t = _shape_to_dag(shape)
    leaf = min(v for v in t.vertices if not t.parents(v))
    path = [leaf]
    while t.children(path[-1]):
        (nxt,) = t.children(path[-1])
        path.append(nxt)
    total = 0
    for e in zip(path, path[1:]):
        prod = 1
        for comp in components_after_edge_removal(t, e):
            prod *= _shape_degree(_downward_shape(comp))
        total += prod
    return total


def tree_degree(t: Dag) -> int:
    """Degree of the toric ideal of a downward directed forest."""
    if not classify(t).is_forest:
        raise GraphError("not a forest")
    deg = 1
    for comp in connected_components(t):
        if not classify(comp).is_downward_directed:
            raise GraphError("component is not a downward directed tree")
        deg *= _shape_degree(_downward_shape(comp))
    return deg

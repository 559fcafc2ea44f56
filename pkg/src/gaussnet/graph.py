"""Directed acyclic graphs on the vertex set 1..n.

Vertices are always the integers ``1..n`` and every edge ``i -> j`` has
``i < j``.  Graphs read from files whose labels are not in that order get
relabelled by a stable topological sort; the original names survive in
``label_map``.
"""

from __future__ import annotations

import re
from collections import defaultdict
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from .errors import CycleError, GraphError, ParseError

Edge = tuple[int, int]


@dataclass(frozen=True)
class Dag:
    """Immutable numerically ordered DAG.

    ``label_map[v - 1]`` is the external name of vertex ``v``; ``None``
    means the names are the vertex numbers themselves.
    """

    n: int
    edges: frozenset[Edge]
    label_map: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        if self.n < 0:
            raise GraphError("vertex count must be non-negative")
        for i, j in self.edges:
            if not (1 <= i <= self.n and 1 <= j <= self.n):
                raise GraphError(f"edge {i} -> {j} out of range 1..{self.n}")
            if i >= j:
                raise GraphError(f"edge {i} -> {j} violates numeric order")
        if self.label_map is not None and len(self.label_map) != self.n:
            raise GraphError("label_map length differs from vertex count")

    @classmethod
    def from_edges(
        cls, n: int, edges: Iterable[Edge], labels: Sequence[str] | None = None
    ) -> "Dag":
        """Build a Dag, relabelling topologically if ``edges`` are out of order.

        ``labels`` names the input vertices ``1..n``; it is carried over to
        ``label_map`` (permuted along with any relabelling).
        """
        edge_list = list(edges)
        seen: set[Edge] = set()
        for i, j in edge_list:
            if not (1 <= i <= n and 1 <= j <= n):
                raise GraphError(f"unknown vertex in edge {i} -> {j}")
            if i == j:
                raise CycleError(f"self-loop at {i}")
            if (i, j) in seen:
                raise GraphError(f"duplicate edge {i} -> {j}")
            seen.add((i, j))
        names = tuple(labels) if labels is not None else None
        if all(i < j for i, j in edge_list):
            return cls(n, frozenset(edge_list), names)
        order = _topological_order(n, edge_list)
        new_index = {old: pos + 1 for pos, old in enumerate(order)}
        base = names if names is not None else tuple(str(v) for v in range(1, n + 1))
        return cls(
            n,
            frozenset((new_index[i], new_index[j]) for i, j in edge_list),
            tuple(base[old - 1] for old in order),
        )

    # -- structure ---------------------------------------------------------

    @property
    def vertices(self) -> range:
        return range(1, self.n + 1)

    @cached_property
    def sorted_edges(self) -> tuple[Edge, ...]:
        return tuple(sorted(self.edges))

    @cached_property
    def _parents(self) -> tuple[tuple[int, ...], ...]:
        pa: list[list[int]] = [[] for _ in range(self.n + 1)]
        for i, j in self.sorted_edges:
            pa[j].append(i)
        return tuple(tuple(p) for p in pa)

    @cached_property
    def _children(self) -> tuple[tuple[int, ...], ...]:
        ch: list[list[int]] = [[] for _ in range(self.n + 1)]
        for i, j in self.sorted_edges:
            ch[i].append(j)
        return tuple(tuple(c) for c in ch)

    def parents(self, v: int) -> tuple[int, ...]:
        return self._parents[v]

    def children(self, v: int) -> tuple[int, ...]:
        return self._children[v]

    def neighbors(self, v: int) -> tuple[int, ...]:
        return tuple(sorted(self._parents[v] + self._children[v]))

    @cached_property
    def _descendants(self) -> tuple[frozenset[int], ...]:
        desc: list[frozenset[int]] = [frozenset()] * (self.n + 1)
        for v in reversed(self.vertices):
            acc = {v}
            for c in self._children[v]:
                acc |= desc[c]
            desc[v] = frozenset(acc)
        return tuple(desc)

    @cached_property
    def _ancestors(self) -> tuple[frozenset[int], ...]:
        anc: list[frozenset[int]] = [frozenset()] * (self.n + 1)
        for v in self.vertices:
            acc = {v}
            for p in self._parents[v]:
                acc |= anc[p]
            anc[v] = frozenset(acc)
        return tuple(anc)

    def descendants(self, v: int) -> frozenset[int]:
        """Descendants of ``v``, including ``v`` itself."""
        return self._descendants[v]

    def ancestors(self, v: int) -> frozenset[int]:
        """Ancestors of ``v``, including ``v`` itself."""
        return self._ancestors[v]

    def label(self, v: int) -> str:
        return self.label_map[v - 1] if self.label_map is not None else str(v)

    def index_of(self, label: str | int) -> int:
        """Internal vertex carrying the external name ``label``."""
        key = str(label)
        if self.label_map is None:
            v = int(key)
            if not 1 <= v <= self.n:
                raise GraphError(f"no vertex labelled {key}")
            return v
        try:
            return self.label_map.index(key) + 1
        except ValueError:
            raise GraphError(f"no vertex labelled {key}") from None

    def check_vertices(self, vs: Iterable[int]) -> None:
        for v in vs:
            if not 1 <= v <= self.n:
                raise GraphError(f"vertex {v} out of range 1..{self.n}")

    def __str__(self) -> str:
        return format_dag(self)


@dataclass(frozen=True)
class VertexPartition:
    """Split of ``1..n`` into hidden and observed vertices."""

    hidden: frozenset[int]
    observed: frozenset[int]

    @classmethod
    def from_hidden(cls, g: Dag, hidden: Iterable[int]) -> "VertexPartition":
        h = frozenset(hidden)
        g.check_vertices(h)
        return cls(h, frozenset(g.vertices) - h)

    def validate(self, g: Dag) -> None:
        if self.hidden & self.observed:
            raise GraphError("hidden and observed sets overlap")
        if self.hidden | self.observed != frozenset(g.vertices):
            raise GraphError("partition does not cover the vertex set")


def _topological_order(n: int, edges: Sequence[Edge]) -> list[int]:
    """Vertices sorted by (longest-path depth, original label); raises on cycles."""
    parents: dict[int, list[int]] = defaultdict(list)
    children: dict[int, list[int]] = defaultdict(list)
    for i, j in edges:
        parents[j].append(i)
        children[i].append(j)
    indeg = {v: len(parents[v]) for v in range(1, n + 1)}
    depth = {v: 0 for v in range(1, n + 1)}
    ready = [v for v in range(1, n + 1) if indeg[v] == 0]
    done = []
    while ready:
        v = ready.pop()
        done.append(v)
        for c in children[v]:
            depth[c] = max(depth[c], depth[v] + 1)
            indeg[c] -= 1
            if indeg[c] == 0:
                ready.append(c)
    if len(done) != n:
        raise CycleError("cycle detected")
    return sorted(range(1, n + 1), key=lambda v: (depth[v], v))


# -- text format -------------------------------------------------------------

_HEADER = re.compile(r"^n\s*(\d+)$")
_EDGE = re.compile(r"^(\S+?)\s*->\s*(\S+)$")


def parse_dag(text: str) -> Dag:
    """Parse the ``n <count>`` / ``<i> -> <j>`` format."""
    n: int | None = None
    edges: list[Edge] = []
    seen: set[Edge] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if n is None:
            m = _HEADER.match(line)
            if not m:
                raise ParseError("expected 'n <count>'", lineno, raw)
            n = int(m.group(1))
            continue
        m = _EDGE.match(line)
        if not m:
            raise ParseError("expected '<i> -> <j>'", lineno, raw)
        try:
            i, j = int(m.group(1)), int(m.group(2))
        except ValueError:
            raise ParseError("vertex labels must be integers", lineno, raw) from None
        if not (1 <= i <= n and 1 <= j <= n):
            raise ParseError(f"unknown vertex (graph has n = {n})", lineno, raw)
        if i == j:
            raise ParseError("cycle detected (self-loop)", lineno, raw)
        if (i, j) in seen:
            raise ParseError("duplicate edge", lineno, raw)
        seen.add((i, j))
        edges.append((i, j))
    if n is None:
        raise ParseError("missing 'n <count>' header")
    try:
        return Dag.from_edges(n, edges)
    except CycleError as exc:
        raise ParseError(str(exc)) from None


def format_dag(g: Dag) -> str:
    lines = [f"n {g.n}"]
    lines.extend(f"{i} -> {j}" for i, j in g.sorted_edges)
    return "\n".join(lines) + "\n"


# -- surgery -----------------------------------------------------------------


def induced_subgraph(g: Dag, s: Iterable[int]) -> Dag:
    """Subgraph on ``s``; vertices renumbered in increasing order, names kept."""
    keep = sorted(set(s))
    g.check_vertices(keep)
    index = {v: k + 1 for k, v in enumerate(keep)}
    edges = [(index[i], index[j]) for i, j in g.sorted_edges if i in index and j in index]
    return Dag(len(keep), frozenset(edges), tuple(g.label(v) for v in keep))


def undirected_components(g: Dag, removed: Edge | None = None) -> list[list[int]]:
    adj: dict[int, list[int]] = {v: [] for v in g.vertices}
    for e in g.sorted_edges:
        if e == removed:
            continue
        i, j = e
        adj[i].append(j)
        adj[j].append(i)
    seen: set[int] = set()
    comps = []
    for v in g.vertices:
        if v in seen:
            continue
        stack, comp = [v], []
        seen.add(v)
        while stack:
            u = stack.pop()
            comp.append(u)
            for w in adj[u]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        comps.append(sorted(comp))
    return comps


def components_after_edge_removal(g: Dag, e: Edge) -> list[Dag]:
    """Connected components of ``g`` minus ``e``, ordered by smallest vertex."""
    if tuple(e) not in g.edges:
        raise GraphError(f"edge {e[0]} -> {e[1]} not in graph")
    smaller = Dag(g.n, g.edges - {tuple(e)}, g.label_map)
    return [induced_subgraph(smaller, comp) for comp in undirected_components(smaller)]


def connected_components(g: Dag) -> list[Dag]:
    return [induced_subgraph(g, comp) for comp in undirected_components(g)]


@dataclass(frozen=True)
class StructureReport:
    is_forest: bool
    is_tree: bool
    is_rooted_directed_tree: bool
    is_downward_directed: bool
    leaves: tuple[int, ...]
    sources: tuple[int, ...]
    sinks: tuple[int, ...]


def classify(g: Dag) -> StructureReport:
    """Tree-shape facts used to gate the tree-only routines.

    ``leaves`` is only populated for rooted directed trees.
    """
    comps = undirected_components(g)
    is_forest = len(g.edges) == g.n - len(comps)
    is_tree = is_forest and len(comps) == 1
    sources = tuple(v for v in g.vertices if not g.parents(v))
    sinks = tuple(v for v in g.vertices if not g.children(v))
    rooted = is_tree and all(len(g.parents(v)) <= 1 for v in g.vertices)
    downward = is_tree and all(len(g.children(v)) <= 1 for v in g.vertices)
    leaves = sinks if rooted else ()
    return StructureReport(is_forest, is_tree, rooted, downward, leaves, sources, sinks)

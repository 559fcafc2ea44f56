"""Graph families used by the property suites: random DAGs, all oriented trees, binary trees."""

from __future__ import annotations

import random
from typing import Iterator

from .graph import Dag, Edge


def random_dag(rng: random.Random, n: int, p: float = 0.5) -> Dag:
    """Each pair i < j becomes an edge independently with probability ``p``."""
    edges = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1) if rng.random() < p]
    return Dag(n, frozenset(edges))


def _numbered(n: int, edges: list[Edge]) -> Dag:
    """Renumber so that every edge increases; edges are given on 0..n-1."""
    indeg = [0] * n
    children: list[list[int]] = [[] for _ in range(n)]
    for u, v in edges:
        indeg[v] += 1
        children[u].append(v)
    order, ready = [], sorted(v for v in range(n) if indeg[v] == 0)
    while ready:
        u = ready.pop(0)
        order.append(u)
        for c in children[u]:
            indeg[c] -= 1
            if indeg[c] == 0:
                ready.append(c)
        ready.sort()
    pos = {v: k + 1 for k, v in enumerate(order)}
    return Dag(n, frozenset((pos[u], pos[v]) for u, v in edges))


def _canonical(n: int, edges: list[Edge]) -> tuple:
    adj: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    for u, v in edges:
        adj[u].append((v, 0))  # 0: edge points away from the current root side
        adj[v].append((u, 1))

    def enc(v: int, parent: int) -> tuple:
        return tuple(sorted((d, enc(w, v)) for w, d in adj[v] if w != parent))

    return min(enc(r, -1) for r in range(n))


def oriented_trees(n: int) -> list[Dag]:
    """One representative of every orientation of every tree on n vertices, up to isomorphism."""
    if n < 1:
        return []
    level: dict[tuple, list[Edge]] = {_canonical(1, []): []}
    for size in range(1, n):
        nxt: dict[tuple, list[Edge]] = {}
        for edges in level.values():
            for v in range(size):
                for e in ((v, size), (size, v)):
                    grown = edges + [e]
                    nxt.setdefault(_canonical(size + 1, grown), grown)
        level = nxt
    return [_numbered(n, edges) for _, edges in sorted(level.items())]


def trees_up_to(n_max: int) -> Iterator[Dag]:
    for n in range(1, n_max + 1):
        yield from oriented_trees(n)


def random_binary_tree(rng: random.Random, leaves: int) -> tuple[Dag, list[int]]:
    """Rooted binary tree grown by random coalescence; returns the tree and its leaves.

    Internal vertices are numbered before the leaves so every edge increases.
    """
    # nodes are built bottom-up as nested tuples, then numbered top-down
    clusters: list = [("leaf", k) for k in range(leaves)]
    while len(clusters) > 1:
        a, b = sorted(rng.sample(range(len(clusters)), 2), reverse=True)
        x, y = clusters.pop(a), clusters.pop(b)
        clusters.append(("node", x, y))
    root = clusters[0]
    internal: list = []
    tips: list = []

    def walk(node) -> None:
        if node[0] == "leaf":
            tips.append(node)
            return
        internal.append(node)
        walk(node[1])
        walk(node[2])

    walk(root)
    index = {id(v): k + 1 for k, v in enumerate(internal)}
    for k, tip in enumerate(sorted(tips, key=lambda t: t[1])):
        index[id(tip)] = len(internal) + k + 1
    edges = []
    for node in internal:
        edges.append((index[id(node)], index[id(node[1])]))
        edges.append((index[id(node)], index[id(node[2])]))
    g = Dag(len(internal) + leaves, frozenset(edges))
    return g, list(range(len(internal) + 1, len(internal) + leaves + 1))


def random_upstream_hidden(rng: random.Random, g: Dag) -> frozenset[int]:
    """A random ancestrally closed vertex set; no edge leaves the observed part into it."""
    hidden: set[int] = set()
    for v in g.vertices:
        if rng.random() < 0.4:
            hidden |= g.ancestors(v)
    return frozenset(hidden)

"""Models with hidden variables.

Constraints for a hidden model are polynomials in the observed covariance
entries only.  Nothing here eliminates hidden parameters; every
constraint is checked by substituting the trek rule of the full graph.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import AlgebraError, GraphError, ParseError, SizeGuardError
from .graph import Dag, VertexPartition, classify
from .markov import d_separated, symbolic_minor
from .polynomial import A, LAMBDA, SIGMA, Monomial, Poly, decode
from .tetrad import all_vanishing_tetrads

Degree = tuple[int, int]


# -- upstream grading -----------------------------------------------------------


@dataclass(frozen=True)
class NonHomogeneous:
    """Two terms of a polynomial whose bidegrees differ."""

    first: Monomial
    first_degree: Degree
    second: Monomial
    second_degree: Degree

    def describe(self) -> str:
        def show(m: Monomial) -> str:
            return "*".join(str(decode(c)) for c in m) or "1"

        return (
            f"not homogeneous: {show(self.first)} has degree {self.first_degree}, "
            f"{show(self.second)} has degree {self.second_degree}"
        )


@dataclass(frozen=True)
class UpstreamGrading:
    partition: VertexPartition

    @classmethod
    def for_graph(cls, g: Dag, hidden: Iterable[int]) -> "UpstreamGrading":
        part = VertexPartition.from_hidden(g, hidden)
        for o, h in g.sorted_edges:
            if o in part.observed and h in part.hidden:
                raise GraphError(f"edge {o} -> {h} runs from an observed to a hidden vertex")
        return cls(part)

    def variable_degree(self, code: int) -> Degree:
        v = decode(code)
        hidden = self.partition.hidden
        if v.kind == SIGMA:
            return (1, (v.i not in hidden) + (v.j not in hidden))
        if v.kind == A:
            return (1, 0) if v.i in hidden else (1, 2)
        if v.i in hidden and v.j not in hidden:
            return (0, 1)
        return (0, 0)

    def monomial_degree(self, mono: Monomial) -> Degree:
        d1 = d2 = 0
        for code in mono:
            x, y = self.variable_degree(code)
            d1 += x
            d2 += y
        return (d1, d2)


def upstream_degree(grading: UpstreamGrading, p: Poly) -> Degree | NonHomogeneous:
    kinds = p.kinds()
    if SIGMA in kinds and kinds & {A, LAMBDA}:
        raise AlgebraError("polynomial mixes covariance variables with parameters")
    if p.is_zero():
        raise AlgebraError("the zero polynomial has no degree")
    terms = [m for m, _ in p.ordered_terms()]
    first = grading.monomial_degree(terms[0])
    for m in terms[1:]:
        d = grading.monomial_degree(m)
        if d != first:
            return NonHomogeneous(terms[0], first, m, d)
    return first


# -- hidden trees -----------------------------------------------------------------


def hidden_tree_generators(t: Dag) -> list[Poly]:
    """Vanishing tetrads among the leaves of a rooted directed tree."""
    report = classify(t)
    if not report.is_rooted_directed_tree:
        raise GraphError("not a rooted directed tree")
    return all_vanishing_tetrads(t, indices=report.leaves)


def _sigma_pair(code: int) -> tuple[int, int]:
    v = decode(code)
    if v.kind != SIGMA:
        raise AlgebraError(f"{v} is not a covariance variable")
    return (v.i, v.j)


def plucker_support_check(b: Poly) -> bool:
    """True iff both monomials of ``b`` are among the three Pluecker monomials of one quartet."""
    terms = b.ordered_terms()
    if len(terms) != 2 or terms[0][1] != -terms[1][1]:
        raise AlgebraError("expected a binomial m1 - m2")
    pairings = []
    for mono, _ in terms:
        if len(mono) != 2:
            raise AlgebraError("expected monomials of degree two")
        pairings.append([_sigma_pair(c) for c in mono])
    quartets = []
    for (i, j), (k, l) in pairings:
        idx = {i, j, k, l}
        if len(idx) != 4:
            return False
        quartets.append(frozenset(idx))
    return quartets[0] == quartets[1]


# -- matrix Schubert graphs -------------------------------------------------------


@dataclass(frozen=True)
class PartialPermutation:
    n: int
    ones: frozenset[tuple[int, int]]

    def __post_init__(self) -> None:
        rows = [i for i, _ in self.ones]
        cols = [j for _, j in self.ones]
        for i, j in self.ones:
            if not (1 <= i <= self.n and 1 <= j <= self.n):
                raise ParseError(f"position ({i},{j}) outside a {self.n}x{self.n} matrix")
        if len(set(rows)) != len(rows) or len(set(cols)) != len(cols):
            raise ParseError("a partial permutation has at most one 1 per row and column")

    def __str__(self) -> str:
        return ",".join(f"({i},{j})" for i, j in sorted(self.ones))


_PAIR = re.compile(r"\(\s*(\d+)\s*,\s*(\d+)\s*\)")


def parse_w(text: str, n: int | None = None) -> PartialPermutation:
    """Parse ``"(1,1),(2,2)"``; ``n`` defaults to the largest index used."""
    body = text.strip()
    pairs = []
    pos = 0
    while pos < len(body):
        m = _PAIR.match(body, pos)
        if not m:
            raise ParseError(f"bad partial permutation near {body[pos:]!r}")
        pairs.append((int(m.group(1)), int(m.group(2))))
        pos = m.end()
        rest = body[pos:].lstrip()
        if rest.startswith(","):
            rest = rest[1:].lstrip()
        pos = len(body) - len(rest)
    if n is None:
        n = max((max(p) for p in pairs), default=0)
    if len(set(pairs)) != len(pairs):
        raise ParseError("repeated position in partial permutation")
    return PartialPermutation(n, frozenset(pairs))


@dataclass(frozen=True)
class SchubertGraph:
    """G(w) with hidden S(w) numbered first, then [n], then [n']."""

    dag: Dag
    partition: VertexPartition
    w: PartialPermutation

    def row(self, i: int) -> int:
        return len(self.w.ones) + i

    def col(self, j: int) -> int:
        return len(self.w.ones) + self.w.n + j


def build_schubert_graph(w: PartialPermutation) -> SchubertGraph:
    ones = sorted(w.ones)
    s, n = len(ones), w.n
    row = {i: s + i for i in range(1, n + 1)}
    col = {j: s + n + j for j in range(1, n + 1)}
    edges = []
    for k, l in itertools.combinations(range(1, n + 1), 2):
        edges.append((row[k], row[l]))
        edges.append((col[k], col[l]))
    for h, (i, j) in enumerate(ones, start=1):
        edges.extend((h, row[k]) for k in range(i, n + 1))
        edges.extend((h, col[k]) for k in range(j, n + 1))
    labels = [f"({i},{j})" for i, j in ones]
    labels += [str(i) for i in range(1, n + 1)]
    labels += [f"{j}'" for j in range(1, n + 1)]
    g = Dag(s + 2 * n, frozenset(edges), tuple(labels))
    return SchubertGraph(g, VertexPartition.from_hidden(g, range(1, s + 1)), w)


def _nonempty_subsets(items: Sequence[int]) -> Iterable[tuple[int, ...]]:
    for k in range(1, len(items) + 1):
        yield from itertools.combinations(items, k)


def schubert_generators(w: PartialPermutation, max_n: int = 3) -> list[Poly]:
    """Minors of the cross block attached to every d-separation A | C | B with C hidden.

    Polynomials use the vertex numbering of :func:`build_schubert_graph`.
    """
    if w.n > max_n:
        raise SizeGuardError(f"schubert_generators limited to n <= {max_n} (got {w.n})")
    sg = build_schubert_graph(w)
    g = sg.dag
    rows = [sg.row(i) for i in range(1, w.n + 1)]
    cols = [sg.col(j) for j in range(1, w.n + 1)]
    hidden = sorted(sg.partition.hidden)
    out: list[Poly] = []
    seen: set[Poly] = set()
    for size in range(0, w.n):
        for C in itertools.combinations(hidden, size):
            for Aset in _nonempty_subsets(rows):
                if len(Aset) <= size:
                    continue
                for Bset in _nonempty_subsets(cols):
                    if len(Bset) <= size or not d_separated(g, Aset, Bset, C):
                        continue
                    for r in itertools.combinations(Aset, size + 1):
                        for c in itertools.combinations(Bset, size + 1):
                            p = symbolic_minor(r, c).normalized_sign()
                            if not p.is_zero() and p not in seen:
                                seen.add(p)
                                out.append(p)
    return out


# -- classical constructions ---------------------------------------------------------


@dataclass(frozen=True)
class HiddenModel:
    """A graph, its hidden/observed split and the groups of hidden vertices that never meet.

    ``observed[k - 1]`` is the vertex playing observed variable ``k``.
    """

    kind: str
    dag: Dag
    partition: VertexPartition
    observed: tuple[int, ...]
    hidden_groups: tuple[frozenset[int], ...]

    def to_internal(self, p: Poly) -> Poly:
        """Rewrite a polynomial in observed variables 1..m into vertex numbering."""
        m = len(self.observed)

        def f(k: int) -> int:
            if not 1 <= k <= m:
                raise AlgebraError(f"observed index {k} out of range 1..{m}")
            return self.observed[k - 1]

        return p.rename_sigma(f)

    def check_join_hypotheses(self) -> None:
        obs = self.partition.observed
        group = {v: k for k, grp in enumerate(self.hidden_groups) for v in grp}
        for i, j in self.dag.sorted_edges:
            if i in obs and j in obs:
                raise GraphError(f"edge {i} -> {j} joins two observed vertices")
            if i in group and j in group and group[i] != group[j]:
                raise GraphError(f"edge {i} -> {j} joins two hidden groups")


CATERPILLAR = {
    # internal path u1 - u2 - u3 - u4 rooted at u2; leaves 1,2 | 3 | 4 | 5,6
    "internal": ("u2", "u1", "u3", "u4"),
    "internal_edges": (("u2", "u1"), ("u2", "u3"), ("u3", "u4")),
    "leaf_parent": ("u1", "u1", "u2", "u3", "u4", "u4"),
}

SNOWFLAKE = {
    # root with three cherry parents: {1,2}, {3,4}, {5,6}
    "internal": ("r", "c1", "c2", "c3"),
    "internal_edges": (("r", "c1"), ("r", "c2"), ("r", "c3")),
    "leaf_parent": ("c1", "c1", "c2", "c2", "c3", "c3"),
}

CLASSICAL_KINDS = ("factor_analysis", "doubled_caterpillar", "doubled_snowflake")


def _doubled(kind: str, shape: dict) -> HiddenModel:
    names = shape["internal"]
    k = len(names)
    leaves = len(shape["leaf_parent"])
    edges = []
    labels = []
    groups = []
    for copy in range(2):
        index = {name: copy * k + pos + 1 for pos, name in enumerate(names)}
        labels.extend(f"{name}_{copy + 1}" for name in names)
        edges.extend((index[a], index[b]) for a, b in shape["internal_edges"])
        edges.extend((index[p], 2 * k + leaf + 1) for leaf, p in enumerate(shape["leaf_parent"]))
        groups.append(frozenset(index.values()))
    labels.extend(str(leaf) for leaf in range(1, leaves + 1))
    g = Dag(2 * k + leaves, frozenset(edges), tuple(labels))
    observed = tuple(range(2 * k + 1, 2 * k + leaves + 1))
    part = VertexPartition.from_hidden(g, range(1, 2 * k + 1))
    return HiddenModel(kind, g, part, observed, tuple(groups))


def construct_classical_graph(kind: str, p: int | None = None, m: int | None = None) -> HiddenModel:
    if kind == "factor_analysis":
        if p is None or m is None or p < 1 or m < 1:
            raise GraphError("factor_analysis needs p >= 1 hidden and m >= 1 observed variables")
        edges = [(h, p + o) for h in range(1, p + 1) for o in range(1, m + 1)]
        labels = tuple(f"{h}'" for h in range(1, p + 1)) + tuple(str(o) for o in range(1, m + 1))
        g = Dag(p + m, frozenset(edges), labels)
        model = HiddenModel(
            kind,
            g,
            VertexPartition.from_hidden(g, range(1, p + 1)),
            tuple(range(p + 1, p + m + 1)),
            tuple(frozenset({h}) for h in range(1, p + 1)),
        )
    elif kind == "doubled_caterpillar":
        model = _doubled(kind, CATERPILLAR)
    elif kind == "doubled_snowflake":
        model = _doubled(kind, SNOWFLAKE)
    else:
        raise GraphError(f"unknown kind {kind!r}; expected one of {', '.join(CLASSICAL_KINDS)}")
    if kind != "factor_analysis" and (p is not None or m is not None):
        raise GraphError(f"{kind} takes no parameters")
    model.check_join_hypotheses()
    return model

"""Treks, the trek-rule map s(i,j) -> sum of a_top * prod(l), and the
covariance matrices it produces.

The trek rule only needs the node variances ``a`` and edge weights ``l``;
the noise variances ``psi`` are kept alongside so that membership in the
admissible parameter region is constructive: ``a_j`` equals the variance of
the regression on the parents of ``j`` plus a strictly positive ``psi_j``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Mapping

from .errors import ParameterError
from .graph import Dag
from .linalg import RationalMatrix
from .polynomial import A, LAMBDA, ModelVariable, Poly, a, lam, poly_sum

Path = tuple[int, ...]


@dataclass(frozen=True, order=True)
class Trek:
    """Colliderless simple path: ``left`` descends top -> ... -> i, ``right`` top -> ... -> j."""

    top: int
    left: Path
    right: Path

    @property
    def source(self) -> int:
        return self.left[-1]

    @property
    def target(self) -> int:
        return self.right[-1]

    def edges(self) -> list[tuple[int, int]]:
        out = list(zip(self.left, self.left[1:]))
        out.extend(zip(self.right, self.right[1:]))
        return out

    def vertices(self) -> tuple[int, ...]:
        """Vertices from the ``i`` end to the ``j`` end."""
        return tuple(reversed(self.left)) + self.right[1:]

    def monomial(self) -> Poly:
        m = a(self.top)
        for i, j in self.edges():
            m = m * lam(i, j)
        return m

    def __str__(self) -> str:
        left = " <- ".join(str(v) for v in reversed(self.left))
        right = " -> ".join(str(v) for v in self.right[1:])
        body = left if not right else f"{left} -> {right}"
        return f"top {self.top}: {body}"


@lru_cache(maxsize=4096)
def directed_paths(g: Dag, start: int, end: int) -> tuple[Path, ...]:
    """All directed paths start -> ... -> end, lexicographically sorted."""
    if start == end:
        return ((start,),)
    if end not in g.descendants(start):
        return ()
    out: list[Path] = []
    for c in g.children(start):
        for rest in directed_paths(g, c, end):
            out.append((start,) + rest)
    return tuple(sorted(out))


@lru_cache(maxsize=16384)
def _treks(g: Dag, i: int, j: int) -> tuple[Trek, ...]:
    out = []
    for top in sorted(g.ancestors(i) & g.ancestors(j)):
        rights = directed_paths(g, top, j)
        for left in directed_paths(g, top, i):
            used = set(left[1:])
            for right in rights:
                if used.isdisjoint(right[1:]):
                    out.append(Trek(top, left, right))
    return tuple(sorted(out))


def enumerate_treks(g: Dag, i: int, j: int) -> list[Trek]:
    """T(i, j), ordered by top, then left path, then right path."""
    g.check_vertices((i, j))
    return list(_treks(g, i, j))


@lru_cache(maxsize=16384)
def _trek_rule(g: Dag, i: int, j: int) -> Poly:
    return poly_sum(t.monomial() for t in _treks(g, i, j))


def trek_rule_sigma(g: Dag, i: int, j: int) -> Poly:
    """Image of s(i,j) under the trek-rule homomorphism; symmetric in i, j."""
    g.check_vertices((i, j))
    if i > j:
        i, j = j, i
    return _trek_rule(g, i, j)


def trek_rule_map(g: Dag):
    """Callable ``(i, j) -> trek_rule_sigma(g, i, j)`` for :func:`substitute_sigma`."""
    return lambda i, j: trek_rule_sigma(g, i, j)


# -- parameters ------------------------------------------------------------------


@dataclass(frozen=True)
class ParameterAssignment:
    a: Mapping[int, Fraction]
    lam: Mapping[tuple[int, int], Fraction]
    psi: Mapping[int, Fraction] = field(default_factory=dict)

    def value(self, v: ModelVariable) -> Fraction:
        if v.kind == A:
            return self.a[v.i]
        if v.kind == LAMBDA:
            return self.lam[(v.i, v.j)]
        raise ParameterError(f"{v} is not a parameter")


def assignment_from(
    g: Dag, lam_values: Mapping[tuple[int, int], Fraction], psi: Mapping[int, Fraction]
) -> ParameterAssignment:
    """Fill in the node variances from edge weights and noise variances.

    a_j = sum_{i,k in pa(j)} l_ij l_kj s_ik + psi_j, processed in vertex order.
    """
    lam_f = {e: Fraction(v) for e, v in lam_values.items()}
    psi_f = {v: Fraction(x) for v, x in psi.items()}
    if set(lam_f) != set(g.edges):
        raise ParameterError("edge weights must be given for exactly the edges of the graph")
    if set(psi_f) != set(g.vertices):
        raise ParameterError("noise variances must be given for every vertex")
    if any(x <= 0 for x in psi_f.values()):
        raise ParameterError("noise variances must be positive")
    a_vals: dict[int, Fraction] = {}
    s = [[Fraction(0)] * (g.n + 1) for _ in range(g.n + 1)]
    for j in g.vertices:
        pa = g.parents(j)
        for k in range(1, j):
            s[k][j] = s[j][k] = sum((lam_f[(i, j)] * s[i][k] for i in pa), Fraction(0))
        reg = sum((lam_f[(i, j)] * lam_f[(k, j)] * s[i][k] for i in pa for k in pa), Fraction(0))
        a_vals[j] = reg + psi_f[j]
        s[j][j] = a_vals[j]
    return ParameterAssignment(a_vals, lam_f, psi_f)


def sample_omega(g: Dag, seed: int) -> ParameterAssignment:
    """Deterministic draw from the admissible region.

    Edge weights are p/q with p in [-9, 9] minus 0 and q in [1, 4]; noise
    variances are k/4 with k in [1, 16].
    """
    rng = random.Random(f"gaussnet:{g.n}:{sorted(g.edges)}:{seed}")
    lam_values = {}
    for e in g.sorted_edges:
        num = rng.choice([x for x in range(-9, 10) if x])
        lam_values[e] = Fraction(num, rng.randint(1, 4))
    psi = {v: Fraction(rng.randint(1, 16), 4) for v in g.vertices}
    return assignment_from(g, lam_values, psi)


def omega_slack(g: Dag, theta: ParameterAssignment) -> dict[int, Fraction]:
    """a_i minus the regression variance for each vertex; all must be positive."""
    sig = {}
    out = {}
    for i in g.vertices:
        for j in g.vertices:
            if i <= j:
                sig[(i, j)] = trek_rule_sigma(g, i, j).evaluate(theta.value)

    def s(i: int, j: int) -> Fraction:
        return sig[(min(i, j), max(i, j))]

    for i in g.vertices:
        pa = g.parents(i)
        reg = sum((theta.lam[(j, i)] * theta.lam[(k, i)] * s(j, k) for j in pa for k in pa), Fraction(0))
        out[i] = theta.a[i] - reg
    return out


def model_covariance(g: Dag, theta: ParameterAssignment) -> RationalMatrix:
    """Evaluate the trek rule at ``theta``; raises unless the result is positive definite."""
    if set(theta.a) != set(g.vertices) or set(theta.lam) != set(g.edges):
        raise ParameterError("assignment does not match the graph")
    slack = omega_slack(g, theta)
    bad = [i for i, x in slack.items() if x <= 0]
    if bad:
        raise ParameterError(f"assignment outside the admissible region at vertices {bad}")
    m = RationalMatrix(
        [[trek_rule_sigma(g, i, j).evaluate(theta.value) for j in g.vertices] for i in g.vertices]
    )
    if not all(d > 0 for d in m.leading_principal_minors()):
        raise ParameterError("covariance is not positive definite (internal error)")
    return m


def recover_parameters(g: Dag, cov: RationalMatrix) -> ParameterAssignment:
    """Invert the parametrization: a_i = s_ii and l_pa(j),j = S_pa,pa^-1 S_pa,j."""
    if cov.rows != g.n or cov.cols != g.n:
        raise ParameterError(f"covariance must be {g.n}x{g.n}")
    if not cov.is_positive_definite():
        raise ParameterError("covariance matrix is not symmetric positive definite")
    a_vals = {i: cov[i - 1, i - 1] for i in g.vertices}
    lam_values: dict[tuple[int, int], Fraction] = {}
    psi: dict[int, Fraction] = {}
    for j in g.vertices:
        pa = [p - 1 for p in g.parents(j)]
        if not pa:
            psi[j] = a_vals[j]
            continue
        s_pp = cov.submatrix(pa, pa)
        s_pj = cov.submatrix(pa, [j - 1])
        coef = s_pp.inverse() @ s_pj
        for k, p in enumerate(pa):
            lam_values[(p + 1, j)] = coef[k, 0]
        explained = (s_pj.transpose() @ coef)[0, 0]
        psi[j] = a_vals[j] - explained
    return ParameterAssignment(a_vals, lam_values, psi)

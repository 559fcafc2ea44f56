"""Brute-force vertex enumeration and lattice volume for small tree polytopes.

This is the independent check on the tree facet description and on the
degree recursion: vertices come from solving every square subsystem of
tight constraints, and volume from a placing triangulation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import AlgebraError, SizeGuardError
from .graph import Dag
from .linalg import RationalMatrix
from .trees import LinearSystem, polytope_system

Point = tuple[Fraction, ...]


def _batched_solve(mats: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Fraction-free Gauss-Jordan on a batch of augmented integer systems.

    ``mats`` has shape (B, d, d + 1).  Returns (numerators, denominators);
    singular systems get denominator 0.
    """
    m = mats.astype(np.int64).copy()
    batch, d, _ = m.shape
    prev = np.ones(batch, dtype=np.int64)
    alive = np.ones(batch, dtype=bool)
    rows = np.arange(batch)
    for k in range(d):
        nonzero = m[:, k:, k] != 0
        has = nonzero.any(axis=1)
        alive &= has
        piv = k + np.argmax(nonzero, axis=1)
        swap = piv != k
        if swap.any():
            r = rows[swap]
            top = m[r, k].copy()
            m[r, k] = m[r, piv[swap]]
            m[r, piv[swap]] = top
        p = m[:, k, k].copy()
        p[~alive] = 1
        col = m[:, :, k].copy()
        pivot_row = m[:, k, :].copy()
        upd = (m * p[:, None, None] - col[:, :, None] * pivot_row[:, None, :]) // prev[:, None, None]
        upd[:, k, :] = pivot_row
        m = np.where(alive[:, None, None], upd, m)
        prev = np.where(alive, p, prev)
    det = prev * alive
    # after elimination every diagonal entry equals the determinant
    return m[:, :, d], det


def _vertices_of(system: LinearSystem) -> list[Point]:
    dim = system.dim
    eq = np.array([list(r) + [c] for r, c in system.equalities], dtype=np.int64)
    ineq_rows = np.array([list(r) for r, _ in system.inequalities], dtype=np.int64)
    ineq_rhs = np.array([c for _, c in system.inequalities], dtype=np.int64)
    ineq = np.hstack([ineq_rows, ineq_rhs[:, None]])
    need = dim - len(eq)
    combos = np.array(list(itertools.combinations(range(len(ineq)), need)), dtype=np.int64)
    found: set[Point] = set()
    for start in range(0, len(combos), 20000):
        chunk = combos[start:start + 20000]
        mats = np.concatenate(
            [np.broadcast_to(eq, (len(chunk),) + eq.shape), ineq[chunk]], axis=1
        )
        num, den = _batched_solve(mats)
        ok = den != 0
        num, den = num[ok], den[ok]
        sign = np.sign(den)
        num, den = num * sign[:, None], den * sign
        slack = num @ ineq_rows.T - den[:, None] * ineq_rhs[None, :]
        feasible = (slack >= 0).all(axis=1)
        for nv, dv in zip(num[feasible], den[feasible]):
            found.add(tuple(Fraction(int(a), int(dv)) for a in nv))
    return sorted(found)


def _int_det(rows: list[list[int]]) -> int:
    """Bareiss determinant of a square integer matrix."""
    m = [list(r) for r in rows]
    n = len(m)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((r for r in range(k + 1, n) if m[r][k]), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def _project(points: Sequence[Sequence[int]]) -> list[list[int]]:
    """Coordinates on the affine hull that preserve the lattice.

    Keeps a set of coordinates independent on the hull such that every
    dropped coordinate is an integer affine function of the kept ones, so
    lattice volume is unchanged by the projection.
    """
    base = points[0]
    diffs = [[a - b for a, b in zip(p, base)] for p in points]
    dim = len(base)
    d = RationalMatrix(diffs).rank() if dim else 0
    if d == 0:
        return [[] for _ in points]
    cols = [[row[k] for row in diffs] for k in range(dim)]
    for keep in itertools.combinations(range(dim), d):
        sub = RationalMatrix([[row[k] for k in keep] for row in diffs])
        if sub.rank() < d:
            continue
        # d independent rows give a square system for the dropped coordinates
        rows: list[int] = []
        for r in range(len(diffs)):
            if sub.submatrix(rows + [r], list(range(d))).rank() == len(rows) + 1:
                rows.append(r)
            if len(rows) == d:
                break
        inv = sub.submatrix(rows, list(range(d))).inverse()
        integral = True
        for k in range(dim):
            if k in keep:
                continue
            target = RationalMatrix([[cols[k][r]] for r in rows])
            coef = inv @ target
            if any(coef[i, 0].denominator != 1 for i in range(d)):
                integral = False
                break
        if integral:
            return [[p[k] for k in keep] for p in points]
    raise AlgebraError("no lattice-preserving coordinate projection")


def normalized_volume(points: Sequence[Sequence[int | Fraction]]) -> int:
    """Lattice-normalised volume of the convex hull of integer ``points``.

    The hull must be full-dimensional after the projection above.
    """
    if not points:
        raise AlgebraError("no points")
    ints = []
    for p in points:
        if any(Fraction(c).denominator != 1 for c in p):
            raise AlgebraError("normalized_volume needs lattice points")
        ints.append([int(c) for c in p])
    pts = _project(ints)
    d = len(pts[0])
    if d == 0:
        return 1

    def vol(simplex: Sequence[int]) -> int:
        base = pts[simplex[0]]
        return _int_det([[a - b for a, b in zip(pts[v], base)] for v in simplex[1:]])

    # greedy initial simplex
    chosen = [0]
    for v in range(1, len(pts)):
        if len(chosen) == d + 1:
            break
        base = pts[chosen[0]]
        trial = [[a - b for a, b in zip(pts[u], base)] for u in chosen[1:] + [v]]
        if RationalMatrix(trial).rank() == len(trial):
            chosen.append(v)
    if len(chosen) != d + 1:
        raise AlgebraError("point set is not full-dimensional")
    simplices = [tuple(sorted(chosen))]
    for v in range(len(pts)):
        if v in chosen:
            continue
        facets: dict[tuple[int, ...], list[int]] = {}
        for s in simplices:
            for k in range(len(s)):
                f = s[:k] + s[k + 1:]
                facets.setdefault(f, []).append(s[k])
        added = []
        for f, opposite in facets.items():
            if len(opposite) != 1:
                continue
            side_v = vol(f + (v,))
            side_o = vol(f + (opposite[0],))
            if side_v != 0 and (side_v > 0) != (side_o > 0):
                added.append(tuple(sorted(f + (v,))))
        simplices.extend(added)
    return sum(abs(vol(s)) for s in simplices)


@dataclass(frozen=True)
class OracleResult:
    vertices: tuple[Point, ...]
    normalized_volume: int | None  # None when some vertex is not a lattice point


def polytope_vertex_oracle(t: Dag, max_n: int = 5) -> OracleResult:
    """Vertices of the facet-described tree polytope and their normalised volume."""
    if t.n > max_n or max_n > 6:
        raise SizeGuardError(f"vertex oracle limited to n <= {min(max_n, 6)} (got n = {t.n})")
    system = polytope_system(t)
    verts = _vertices_of(system)
    lattice = all(c.denominator == 1 for v in verts for c in v)
    return OracleResult(tuple(verts), normalized_volume(verts) if lattice else None)

import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import complete, load
from gaussnet.errors import AlgebraError, GraphError
from gaussnet.generators import random_dag, trees_up_to
from gaussnet.graph import Dag
from gaussnet.markov import d_separated
from gaussnet.polynomial import a, parse_poly, sigma
from gaussnet.tetrad import (
    all_vanishing_tetrads,
    choke_points,
    minor_vanishes,
    tetrad,
    tetrad_vanishes,
    treks_between,
    verify_vanishing,
)

random_graphs = st.tuples(st.integers(4, 6), st.integers(0, 100_000)).map(
    lambda t: random_dag(random.Random(t[1]), t[0])
)


def _pairings(n):
    for q in itertools.combinations(range(1, n + 1), 4):
        p, r, s, t = q
        yield p, r, s, t
        yield p, s, r, t
        yield p, t, r, s
    # a few with repeated indices
    for i, j, k in itertools.permutations(range(1, n + 1), 3):
        yield i, j, i, k


def test_a139_choke(a139):
    rep = choke_points(a139, {2, 3}, {4, 5})
    assert 4 in rep.vertices and not rep.trivially_vanishing
    assert dict(rep.points)[4] == "J"
    assert tetrad_vanishes(a139, 2, 4, 3, 5)
    assert tetrad(2, 4, 3, 5).normalized_sign() in all_vanishing_tetrads(a139)


def test_quartet_choke(quartet):
    # root 1, cherries 2 -> {4,5} and 3 -> {6,7}
    rep = choke_points(quartet, {4, 5}, {6, 7})
    assert {2, 1, 3} <= set(rep.vertices)
    assert rep.points == ((2, "I"), (1, "both"), (3, "J"))


def test_quartet_tetrads(quartet):
    (t,) = all_vanishing_tetrads(quartet, indices=[4, 5, 6, 7])
    assert t.normalized_sign() == (sigma(4, 6) * sigma(5, 7) - sigma(4, 7) * sigma(5, 6)).normalized_sign()


def test_trivially_vanishing():
    g = Dag(4, frozenset({(1, 2), (3, 4)}))
    rep = choke_points(g, {1, 2}, {3, 4})
    assert rep.trivially_vanishing and rep.points == ()
    assert tetrad_vanishes(g, 1, 3, 2, 4)


def test_no_trek_kills_the_tetrad():
    g = Dag(4, frozenset({(1, 2), (1, 3)}))
    # s(1,4) and s(2,4) are zero, so both products vanish
    assert tetrad_vanishes(g, 1, 4, 2, 3) is verify_vanishing(g, tetrad(1, 4, 2, 3))


def test_choke_needs_nonempty_sets(fourcycle):
    with pytest.raises(GraphError):
        choke_points(fourcycle, set(), {1})


def test_fourcycle_matches_oracle(fourcycle):
    assert tetrad_vanishes(fourcycle, 1, 2, 3, 4) == verify_vanishing(fourcycle, tetrad(1, 2, 3, 4))


def test_complete_dag_has_none():
    assert all_vanishing_tetrads(complete(4)) == []
    for i, j, k, l in _pairings(4):
        if len({i, j, k, l}) == 4:
            assert not verify_vanishing(complete(4), tetrad(i, j, k, l))


def test_verify_examples(verma, fourcycle):
    f = parse_poly(load_text("verma_f.txt"))
    assert verify_vanishing(verma, f)
    assert verify_vanishing(fourcycle, sigma(1, 1) * sigma(2, 3) - sigma(1, 3) * sigma(1, 2))
    assert not verify_vanishing(fourcycle, sigma(1, 1))
    with pytest.raises(AlgebraError):
        verify_vanishing(fourcycle, a(1))
    with pytest.raises(GraphError):
        verify_vanishing(fourcycle, sigma(1, 5))


def load_text(name):
    from conftest import DATA

    lines = (DATA / name).read_text().splitlines()
    return " ".join(line.split("#")[0] for line in lines).strip()


def test_fourcycle_cubic(fourcycle):
    printed = parse_poly(load_text("fourcycle_cubic_printed.txt"))
    corrected = parse_poly(load_text("fourcycle_cubic.txt"))
    assert verify_vanishing(fourcycle, corrected)
    assert not verify_vanishing(fourcycle, printed)
    assert minor_vanishes(fourcycle, [1, 2, 3], [2, 3, 4])


@settings(max_examples=120, deadline=None)
@given(random_graphs)
def test_theorem_cross_validation(g):
    for i, j, k, l in _pairings(g.n):
        assert tetrad_vanishes(g, i, j, k, l) == verify_vanishing(g, tetrad(i, j, k, l))


@settings(max_examples=60, deadline=None)
@given(random_graphs)
def test_choke_order(g):
    for I, J in [({1, 2}, {3, 4}), ({1, 3}, {2, 4}), ({2, 3}, {1, 4})]:
        rep = choke_points(g, I, J)
        treks = treks_between(g, I, J)
        for t in treks:
            seq = t.vertices()
            assert all(v in seq for v in rep.vertices)
            pos = [seq.index(v) for v in rep.vertices]
            assert pos == sorted(pos)
            for v, side in rep.points:
                if side in ("I", "both"):
                    assert v in t.left
                if side in ("J", "both"):
                    assert v in t.right


def test_tree_tetrads_have_ci_witness():
    for g in trees_up_to(6):
        for i, j, k, l in _pairings(g.n):
            if len({i, j, k, l}) < 4 or not tetrad_vanishes(g, i, j, k, l):
                continue
            I, J = {i, k}, {j, l}
            # each product killed by a marginally independent pair
            trivial = all(
                d_separated(g, {u}, {v}) or d_separated(g, {x}, {y})
                for (u, v), (x, y) in [((i, j), (k, l)), ((i, l), (j, k))]
            )
            witness = trivial or d_separated(g, I, J, set()) or any(
                d_separated(g, I - {c}, J - {c}, {c}) for c in g.vertices
            )
            assert witness, (g, i, j, k, l)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 100_000))
def test_ideal_closure(seed):
    rng = random.Random(seed)
    g = random_dag(rng, 5)
    members = [p for p in all_vanishing_tetrads(g)]
    if len(members) < 2:
        return
    p, q = rng.sample(members, 2)
    u, v = sorted(rng.sample(range(1, 6), 2))
    assert verify_vanishing(g, p + q)
    assert verify_vanishing(g, sigma(u, v) * p)
    assert verify_vanishing(g, p - sigma(u, u) * q)


def test_output_is_canonical(a139):
    out = all_vanishing_tetrads(a139)
    assert len(set(out)) == len(out)
    assert all(p == p.normalized_sign() for p in out)
    assert out == all_vanishing_tetrads(a139)

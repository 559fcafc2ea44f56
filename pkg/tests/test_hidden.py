import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import DATA
from gaussnet.errors import AlgebraError, GraphError, ParseError, SizeGuardError
from gaussnet.generators import random_binary_tree, random_dag, random_upstream_hidden
from gaussnet.graph import Dag, VertexPartition
from gaussnet.hidden import (
    HiddenModel,
    NonHomogeneous,
    PartialPermutation,
    UpstreamGrading,
    build_schubert_graph,
    construct_classical_graph,
    hidden_tree_generators,
    parse_w,
    plucker_support_check,
    schubert_generators,
    upstream_degree,
)
from gaussnet.markov import enumerate_ci_statements, ci_minor_polynomials, symbolic_minor
from gaussnet.polynomial import a, lam, parse_poly, sigma
from gaussnet.tetrad import tetrad, verify_vanishing
from gaussnet.treks import trek_rule_sigma
from oracles import quartet_splits


def read_poly(name):
    lines = (DATA / name).read_text().splitlines()
    return parse_poly(" ".join(line.split("#")[0] for line in lines))


# -- grading ----------------------------------------------------------------------


def test_verma_degrees(verma):
    f = read_poly("verma_f.txt")
    assert upstream_degree(UpstreamGrading.for_graph(verma, {1, 2}), f) == (4, 5)
    # every index of f is observed once only vertex 1 is hidden
    assert upstream_degree(UpstreamGrading.for_graph(verma, {1}), f) == (4, 8)


def test_sigma_degree_table(verma):
    grading = UpstreamGrading.for_graph(verma, {1, 2})
    assert upstream_degree(grading, sigma(1, 2)) == (1, 0)
    assert upstream_degree(grading, sigma(1, 3)) == (1, 1)
    assert upstream_degree(grading, sigma(3, 4)) == (1, 2)


def test_parameter_degree_table(verma):
    grading = UpstreamGrading.for_graph(verma, {1, 2})
    assert upstream_degree(grading, a(1)) == (1, 0)
    assert upstream_degree(grading, a(3)) == (1, 2)
    assert upstream_degree(grading, lam(1, 3)) == (0, 1)
    assert upstream_degree(grading, lam(3, 4)) == (0, 0)


def test_non_homogeneous(verma):
    grading = UpstreamGrading.for_graph(verma, {1, 2})
    res = upstream_degree(grading, sigma(1, 3) + sigma(3, 3))
    assert isinstance(res, NonHomogeneous)
    assert {res.first_degree, res.second_degree} == {(1, 1), (1, 2)}
    assert "not homogeneous" in res.describe()


def test_grading_errors(verma):
    with pytest.raises(GraphError):
        UpstreamGrading.for_graph(verma, {3})  # 1 -> 3 enters the hidden set
    grading = UpstreamGrading.for_graph(verma, {1, 2})
    with pytest.raises(AlgebraError):
        upstream_degree(grading, sigma(1, 2) + a(1))
    with pytest.raises(AlgebraError):
        upstream_degree(grading, sigma(1, 2) - sigma(1, 2))


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 6), st.integers(0, 100_000))
def test_trek_rule_is_homogeneous(n, seed):
    rng = random.Random(seed)
    g = random_dag(rng, n)
    hidden = random_upstream_hidden(rng, g)
    grading = UpstreamGrading.for_graph(g, hidden)
    for i in g.vertices:
        for j in range(i, n + 1):
            image = trek_rule_sigma(g, i, j)
            if image.is_zero():
                continue
            assert upstream_degree(grading, image) == upstream_degree(grading, sigma(i, j))
    for stmt in enumerate_ci_statements(g, 2, 1):
        for p in ci_minor_polynomials(stmt):
            assert not isinstance(upstream_degree(grading, p), NonHomogeneous)


# -- hidden trees -----------------------------------------------------------------


def test_quartet(quartet):
    (t,) = hidden_tree_generators(quartet)
    assert t == tetrad(4, 6, 5, 7).normalized_sign()


def test_three_leaves():
    # r -> a, a -> 1, a -> 2, r -> 3 with r = 1, a = 2, leaves 3, 4, 5
    t = Dag(5, frozenset({(1, 2), (2, 3), (2, 4), (1, 5)}))
    assert hidden_tree_generators(t) == []


def test_hidden_tree_needs_rooted_tree(fourcycle):
    with pytest.raises(GraphError):
        hidden_tree_generators(fourcycle)
    with pytest.raises(GraphError):
        hidden_tree_generators(Dag(3, frozenset({(1, 3), (2, 3)})))


def _split_tetrads(g, leaves):
    out = set()
    for split in quartet_splits(g, leaves):
        (x, y), (z, w) = (sorted(side) for side in sorted(split, key=min))
        out.add(tetrad(x, z, y, w).normalized_sign())
    return out


def test_caterpillar_splits():
    # root 1 -> 2 -> 3 -> 4, leaves hang off the spine
    edges = {(1, 2), (2, 3), (3, 4), (1, 5), (2, 6), (3, 7), (4, 8), (4, 9)}
    g = Dag(9, frozenset(edges))
    leaves = [5, 6, 7, 8, 9]
    assert set(hidden_tree_generators(g)) == _split_tetrads(g, leaves)


@settings(max_examples=40, deadline=None)
@given(st.integers(4, 7), st.integers(0, 100_000))
def test_binary_tree_splits(n_leaves, seed):
    g, leaves = random_binary_tree(random.Random(seed), n_leaves)
    gens = hidden_tree_generators(g)
    assert len(gens) == len(set(gens))
    assert set(gens) == _split_tetrads(g, leaves)
    for p in gens:
        assert verify_vanishing(g, p)
        assert plucker_support_check(p)


def test_plucker_examples():
    assert plucker_support_check(sigma(1, 3) * sigma(2, 4) - sigma(1, 4) * sigma(2, 3))
    assert plucker_support_check(sigma(1, 2) * sigma(3, 4) - sigma(1, 3) * sigma(2, 4))
    assert not plucker_support_check(sigma(1, 2) * sigma(1, 3) - sigma(1, 4) * sigma(2, 3))


@pytest.mark.parametrize(
    "bad",
    [
        sigma(1, 2) * sigma(3, 4),
        sigma(1, 2) * sigma(3, 4) - 2 * sigma(1, 3) * sigma(2, 4),
        sigma(1, 2) - sigma(3, 4),
        a(1) * a(2) - a(3) * a(4),
    ],
)
def test_plucker_malformed(bad):
    with pytest.raises(AlgebraError):
        plucker_support_check(bad)


# -- Schubert ---------------------------------------------------------------------


def _partial_permutations(n):
    cells = list(itertools.product(range(1, n + 1), repeat=2))
    for k in range(n + 1):
        for ones in itertools.combinations(cells, k):
            rows = {i for i, _ in ones}
            cols = {j for _, j in ones}
            if len(rows) == len(cols) == k:
                yield PartialPermutation(n, frozenset(ones))


def test_partial_permutation_parsing():
    w = parse_w("(1,1), (2,2)", 3)
    assert w == PartialPermutation(3, frozenset({(1, 1), (2, 2)}))
    assert str(w) == "(1,1),(2,2)"
    assert parse_w("(2,1)").n == 2
    assert parse_w("", 2).ones == frozenset()
    for bad in ["(1,1),(1,2)", "(1,1) x", "(3,1)"]:
        with pytest.raises(ParseError):
            parse_w(bad, 2)


def test_schubert_graph_example():
    sg = build_schubert_graph(parse_w("(1,1),(2,2)", 2))
    # hidden 1, 2; rows 3, 4; columns 5, 6
    assert sg.row(1) == 3 and sg.col(2) == 6
    assert sg.dag.sorted_edges == ((1, 3), (1, 4), (1, 5), (1, 6), (2, 4), (2, 6), (3, 4), (5, 6))
    assert sg.partition.hidden == frozenset({1, 2})
    assert sg.dag.label_map == ("(1,1)", "(2,2)", "1", "2", "1'", "2'")


def test_schubert_zero():
    w = PartialPermutation(2, frozenset())
    assert set(schubert_generators(w)) == {sigma(i, j) for i in (1, 2) for j in (3, 4)}
    g = build_schubert_graph(w).dag
    assert all(trek_rule_sigma(g, i, j).is_zero() for i in (1, 2) for j in (3, 4))


def test_schubert_identity_1x1():
    assert schubert_generators(PartialPermutation(1, frozenset({(1, 1)}))) == []


def test_schubert_rank_two():
    w = parse_w("(1,1),(2,2)", 3)
    gens = schubert_generators(w)
    assert symbolic_minor([3, 4, 5], [6, 7, 8]).normalized_sign() in gens
    g = build_schubert_graph(w).dag
    assert all(verify_vanishing(g, p) for p in gens)


def test_schubert_exhaustive_small():
    count = 0
    for n in (1, 2):
        for w in _partial_permutations(n):
            g = build_schubert_graph(w).dag
            for p in schubert_generators(w):
                assert verify_vanishing(g, p), (w, p)
            count += 1
    assert count == 2 + 7


def test_schubert_size_guard():
    with pytest.raises(SizeGuardError):
        schubert_generators(PartialPermutation(4, frozenset()))


# -- classical constructions --------------------------------------------------------


def test_factor_analysis():
    model = construct_classical_graph("factor_analysis", 1, 4)
    assert model.dag.label_map == ("1'", "1", "2", "3", "4")
    p = model.to_internal(sigma(1, 2) * sigma(3, 4) - sigma(1, 3) * sigma(2, 4))
    assert verify_vanishing(model.dag, p)
    two = construct_classical_graph("factor_analysis", 2, 5)
    assert not verify_vanishing(two.dag, two.to_internal(tetrad(1, 2, 3, 4)))


def test_doubled_caterpillar():
    model = construct_classical_graph("doubled_caterpillar")
    det = symbolic_minor([1, 2, 3], [4, 5, 6])
    assert verify_vanishing(model.dag, model.to_internal(det))
    assert model.dag.n == 14


def test_doubled_snowflake():
    model = construct_classical_graph("doubled_snowflake")
    corrected = read_poly("snowflake_corrected.txt")
    printed = read_poly("snowflake_printed.txt")
    assert verify_vanishing(model.dag, model.to_internal(corrected))
    assert not verify_vanishing(model.dag, model.to_internal(printed))
    # the two differ only in the signs of the last four terms
    assert {m for m, _ in corrected.ordered_terms()} == {m for m, _ in printed.ordered_terms()}


def test_join_hypotheses_hold():
    for kind in ("doubled_caterpillar", "doubled_snowflake"):
        model = construct_classical_graph(kind)
        obs = model.partition.observed
        first, second = model.hidden_groups
        for i, j in model.dag.edges:
            assert not (i in obs and j in obs)
            assert not ({i, j} & first and {i, j} & second)


def test_join_hypotheses_violated():
    g = Dag(3, frozenset({(1, 2), (2, 3)}))
    model = HiddenModel("custom", g, VertexPartition.from_hidden(g, {1}), (2, 3), (frozenset({1}),))
    with pytest.raises(GraphError, match="observed"):
        model.check_join_hypotheses()
    g = Dag(3, frozenset({(1, 2), (1, 3)}))
    model = HiddenModel(
        "custom", g, VertexPartition.from_hidden(g, {1, 2}), (3,), (frozenset({1}), frozenset({2}))
    )
    with pytest.raises(GraphError, match="hidden groups"):
        model.check_join_hypotheses()


def test_classical_errors():
    with pytest.raises(GraphError):
        construct_classical_graph("factor_analysis")
    with pytest.raises(GraphError):
        construct_classical_graph("doubled_snowflake", 1, 2)
    with pytest.raises(GraphError):
        construct_classical_graph("triple_tree")
    model = construct_classical_graph("factor_analysis", 1, 4)
    with pytest.raises(AlgebraError):
        model.to_internal(sigma(1, 5))

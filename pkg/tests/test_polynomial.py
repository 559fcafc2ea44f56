from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gaussnet.errors import AlgebraError, ParseError
from gaussnet.polynomial import (
    Poly,
    a,
    covariance,
    edge_weight,
    format_poly,
    lam,
    parse_poly,
    sigma,
    substitute_sigma,
)
from gaussnet.treks import trek_rule_map
from gaussnet.graph import Dag


def test_monomial_product():
    assert (a(1) * lam(1, 2)) * (a(1) * lam(1, 3)) == a(1) ** 2 * lam(1, 2) * lam(1, 3)
    assert format_poly(a(1) ** 2 * lam(1, 2) * lam(1, 3)) == "a1^2*l(1,2)*l(1,3)"


def test_variables_are_canonical():
    assert sigma(3, 1) == sigma(1, 3)
    assert covariance(4, 2) == covariance(2, 4)
    with pytest.raises(AlgebraError):
        edge_weight(2, 1)


def test_printing():
    p = 2 * sigma(1, 2) * sigma(3, 4) - sigma(1, 1) ** 2 + 3
    assert format_poly(p) == "-s(1,1)^2 + 2*s(1,2)*s(3,4) + 3"
    assert format_poly(Poly()) == "0"
    assert format_poly(-sigma(1, 2)) == "-s(1,2)"


def test_parse_round_trip_examples():
    for text in [
        "a1*l(1,2)*l(2,4) + a1*l(1,3)*l(3,4)",
        "-s(2,2)*s(2,5)*s(3,4)^2 + s(2,3)*s(2,4)*s(2,5)*s(3,4)",
        "-3*s(1,1) + 7",
        "0",
    ]:
        assert format_poly(parse_poly(text)) == text


def test_parse_accepts_loose_forms():
    assert parse_poly("s(2,1) * s( 3 , 3 )") == sigma(1, 2) * sigma(3, 3)
    assert parse_poly("s(1,2)^2 - s(1,2)*s(1,2)").is_zero()


@pytest.mark.parametrize("bad", ["s(1,2) +", "x1", "s(1)", "2**s(1,1)", "l(2,1)"])
def test_parse_errors(bad):
    with pytest.raises((ParseError, AlgebraError)):
        parse_poly(bad)


def test_substitution_examples(fourcycle, a139):
    quad = sigma(1, 1) * sigma(2, 3) - sigma(1, 3) * sigma(1, 2)
    assert substitute_sigma(quad, trek_rule_map(fourcycle)).is_zero()
    tet = sigma(2, 4) * sigma(3, 5) - sigma(2, 5) * sigma(3, 4)
    assert substitute_sigma(tet, trek_rule_map(a139)).is_zero()
    assert substitute_sigma(sigma(1, 1), trek_rule_map(fourcycle)) == a(1)
    edgeless = Dag(2, frozenset())
    assert substitute_sigma(sigma(1, 2), trek_rule_map(edgeless)).is_zero()


def test_substitution_errors():
    with pytest.raises(AlgebraError):
        substitute_sigma(sigma(1, 2), {covariance(1, 1): a(1)})
    with pytest.raises(AlgebraError):
        substitute_sigma(a(1), {})


# random polynomials in a handful of variables
VARS = [a(1), a(2), lam(1, 2), sigma(1, 2), sigma(2, 2)]
monomials = st.lists(st.sampled_from(range(len(VARS))), max_size=3)
polys = st.lists(st.tuples(st.integers(-5, 5), monomials), max_size=4).map(
    lambda terms: sum(
        (c * _product(VARS[k] for k in mono) for c, mono in terms), Poly()
    )
)


def _product(factors):
    out = Poly.const(1)
    for f in factors:
        out = out * f
    return out


@settings(max_examples=80, deadline=None)
@given(polys, polys, polys)
def test_ring_axioms(p, q, r):
    assert (p + q) + r == p + (q + r)
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r
    assert p + q == q + p and p * q == q * p
    assert (p - p).is_zero()
    assert -(-p) == p


@settings(max_examples=80, deadline=None)
@given(polys, polys)
def test_evaluation_is_a_homomorphism(p, q):
    values = {v: Fraction(k + 2, 3) for k, v in enumerate(VARS)}

    def val(var):
        return next(x for v, x in values.items() if v.terms == Poly.var(var).terms)

    assert (p * q).evaluate(val) == p.evaluate(val) * q.evaluate(val)
    assert (p + q).evaluate(val) == p.evaluate(val) + q.evaluate(val)


SIGMAS = [sigma(i, j) for i in range(1, 4) for j in range(i, 4)]
sigma_polys = st.lists(
    st.tuples(st.integers(-3, 3), st.lists(st.sampled_from(range(len(SIGMAS))), max_size=3)),
    max_size=4,
).map(lambda terms: sum((c * _product(SIGMAS[k] for k in mono) for c, mono in terms), Poly()))


@settings(max_examples=60, deadline=None)
@given(sigma_polys, sigma_polys)
def test_substitution_is_a_homomorphism(p, q):
    g = Dag(3, frozenset({(1, 2), (1, 3), (2, 3)}))
    m = trek_rule_map(g)
    assert substitute_sigma(p * q, m) == substitute_sigma(p, m) * substitute_sigma(q, m)
    assert substitute_sigma(p + q, m) == substitute_sigma(p, m) + substitute_sigma(q, m)


@settings(max_examples=60, deadline=None)
@given(sigma_polys)
def test_print_parse_round_trip(p):
    assert parse_poly(format_poly(p)) == p


def test_hash_and_equality():
    assert hash(sigma(1, 2) + 0) == hash(sigma(1, 2))
    assert Poly.const(0) == 0 and Poly.const(3) == 3
    assert {sigma(1, 2) * 2, 2 * sigma(1, 2)} == {2 * sigma(1, 2)}


def test_normalized_sign():
    p = sigma(1, 2) * sigma(3, 4) - sigma(1, 3) * sigma(2, 4)
    assert (-p).normalized_sign() == p
    assert p.normalized_sign() == p

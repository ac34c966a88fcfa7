from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qcg.errors import InfiniteQuotientError
from qcg.grass import GrassSpec
from qcg.qring import build_relations
from qcg.wpoly import FORMAL, MonomialOrder, Weighting, WPolynomial, groebner_basis, initial_form, trace
from qcg.wpoly.poly import determinant, monomials_up_to

X1 = WPolynomial.var(2, 1)
X2 = WPolynomial.var(2, 2)
Q = WPolynomial.q(2)
W24 = Weighting.grassmannian(2, 4)


def g24_model(q_mode=FORMAL):
    rels = build_relations(GrassSpec(2, 4), q_mode).relations
    return groebner_basis(list(rels), W24, q_mode)


G24 = g24_model()


def test_arithmetic_and_display():
    p = (X1 + X2) ** 2 - Q
    assert str(p) == "X1^2 + 2*X1*X2 + X2^2 - q"
    assert p - p == 0
    assert (X1 * 3).scale(Fraction(1, 3)) == X1
    assert WPolynomial.constant(2, Fraction(4, 2)).constant_value() == 2


def test_derivative_and_evaluate():
    p = X1 ** 3 * X2 - Q * X2
    assert p.derivative(1) == 3 * X1 ** 2 * X2
    assert p.derivative(2) == X1 ** 3 - Q
    assert p.evaluate((2, 3), q=5) == 24 - 15
    assert p.scale(Fraction(1, 2)).evaluate((1, 1), q=0) == Fraction(1, 2)


def test_gradings():
    assert (X1 ** 2 - Q).cohomological_degree(W24) == 2
    assert Q.homogeneous_degree(W24) == 4
    assert (X1 ** 4 + Q).is_homogeneous(W24)
    assert not (X1 ** 2 + Q).is_homogeneous(W24)


def test_initial_form_examples():
    w12 = Weighting.grassmannian(1, 2)
    x = WPolynomial.var(1, 1)
    assert initial_form(x ** 2 - WPolynomial.q(1), w12) == x ** 2
    assert initial_form(X1 + X2, W24) == X2
    f = build_relations(GrassSpec(2, 4)).relations[-1]
    assert initial_form(f, W24) == f - Q
    with pytest.raises(ValueError):
        initial_form(WPolynomial.zero(2), W24)


def test_order_prefers_low_index_within_weight():
    order = MonomialOrder(W24.variable_weights)
    assert order.key((3, 0)) > order.key((1, 1))
    assert order.key((0, 2)) < order.key((2, 1))


def test_specialized_projective_line():
    w = Weighting.grassmannian(1, 2)
    x = WPolynomial.var(1, 1)
    m = groebner_basis([x ** 2 - 1], w, 1)
    assert list(m.reduced_basis) == [x ** 2 - 1]
    assert list(m.quotient_basis) == [(0,), (1,)]
    op = m.mult_operator(x)
    assert trace(op) == 0
    assert [[c.constant_value() if c else 0 for c in row] for row in op] == [[0, 1], [1, 0]]


def test_g24_basis_and_quotient():
    assert G24.dimension == 6
    assert list(G24.quotient_basis) == [(0, 0), (1, 0), (2, 0), (0, 1), (1, 1), (0, 2)]
    assert set(G24.reduced_basis) == {
        X1 ** 3 - 2 * X1 * X2,
        X1 ** 2 * X2 - X2 ** 2 - Q,
        X1 * X2 ** 2 - Q * X1,
        X2 ** 3 - Q * X1 ** 2 + Q * X2,
    }


def test_trivial_quotient():
    m = groebner_basis([X1, X2], W24, 0)
    assert list(m.quotient_basis) == [(0, 0)]


def test_infinite_quotient_rejected():
    with pytest.raises(InfiniteQuotientError):
        groebner_basis([X1 * X2], W24, 0)


def test_normal_form_examples():
    f1, f2 = build_relations(GrassSpec(2, 4)).relations
    assert G24.normal_form(f1) == 0
    assert G24.normal_form(f2) == 0
    assert G24.normal_form(X1 ** 4) == 2 * X2 ** 2 + 2 * Q
    assert G24.normal_form(X1 ** 8) == 8 * Q * X2 ** 2 + 8 * Q ** 2
    assert G24.normal_form(X1 * X2 ** 2) == Q * X1
    assert G24.normal_form(X2 ** 3) == Q * (X1 ** 2 - X2)


def test_identity_operator():
    op = G24.mult_operator(WPolynomial.constant(2, 1))
    assert trace(op) == 6


def test_determinant():
    mat = [[X1, X2], [Q, X1]]
    assert determinant(mat, 2) == X1 ** 2 - Q * X2


def test_monomial_enumeration():
    assert list(monomials_up_to(W24, 2)) == [(0, 0), (1, 0), (2, 0), (0, 1)]


# random polynomials ---------------------------------------------------------

coeff = st.integers(-5, 5)
mono = st.tuples(st.integers(0, 4), st.integers(0, 3), st.integers(0, 2))
sparse = st.dictionaries(mono, coeff, max_size=4).map(lambda d: WPolynomial(2, d))


@settings(max_examples=500, deadline=None)
@given(sparse, sparse, sparse)
def test_ring_axioms(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c


@settings(max_examples=200, deadline=None)
@given(sparse, sparse)
def test_normal_form_is_multiplicative(f, g):
    nf = G24.normal_form
    assert nf(f * g) == nf(nf(f) * nf(g))


@settings(max_examples=100, deadline=None)
@given(sparse)
def test_reduce_agrees_with_table_normal_form(f):
    r = G24.reduce(f)
    assert r == G24.normal_form(f)
    assert all(G24.is_standard(e[:-1]) for e in r.terms)


@pytest.mark.parametrize("q", [1, Fraction(-2, 3)])
def test_specialized_matches_formal(q):
    m = g24_model(q)
    for e in monomials_up_to(W24, 12):
        F = WPolynomial.monomial(e)
        assert m.normal_form(F) == G24.normal_form(F).subs_q(q)

import json
import random
from fractions import Fraction

import pytest

from qcg.grass import GrassSpec, spec_range
from qcg.qring import build_relations, genus_invariant_exact, quantum_model
from qcg.residues import (
    genus_invariant_residue,
    grassmannian_context,
    jacobian,
    normalization_c,
    alternate_point_class,
    closed_form_prefactor,
    point_class,
    reconciliation,
    residue_context,
    sign_report,
    total_residue,
    trace_residue_check,
)
from qcg.schubert import full_box, schur_polynomial
from qcg.wpoly import Weighting, WPolynomial, monomials_up_to

S24 = GrassSpec(2, 4)
x1, x2 = WPolynomial.var(2, 1), WPolynomial.var(2, 2)


def ctx_for(spec):
    return grassmannian_context(quantum_model(spec))


def test_jacobian_examples():
    x = WPolynomial.var(1, 1)
    assert jacobian(build_relations(GrassSpec(1, 2))) == 2 * x
    assert jacobian(build_relations(S24)) == x1 ** 4 + 4 * x2 ** 2
    assert jacobian(build_relations(GrassSpec(2, 3))) == x1 ** 2 + 2 * x2


def test_residue_examples():
    ctx = ctx_for(S24)
    assert ctx.N == 4 and ctx.m_top == (0, 2)
    assert total_residue(ctx.jacobian, ctx) == 6
    assert total_residue(x2 ** 2, ctx) == 1
    assert total_residue(x1 ** 8, ctx) == WPolynomial.qpoly({1: 8})


def test_projective_line_trace_at_q_one():
    x = WPolynomial.var(1, 1)
    w = Weighting.grassmannian(1, 2)
    ctx = residue_context([x ** 2 - 1], w, 1)
    ok, tr, res = trace_residue_check(x, ctx)
    assert ok and tr == 0 and res == 0
    ok, tr, _ = trace_residue_check(WPolynomial.constant(1, 1), ctx)
    assert ok and tr == 2


@pytest.mark.parametrize("spec", list(spec_range(3, 7)), ids=str)
def test_residue_structure(spec):
    ctx = ctx_for(spec)
    g = ctx.model
    assert ctx.N == spec.dimension
    assert ctx.m_top == (0,) * (spec.k - 1) + (spec.n - spec.k,)
    for b in g.quotient_basis:
        if g.weight(b) < ctx.N:
            assert total_residue(WPolynomial.monomial(b), ctx) == 0
    assert total_residue(ctx.jacobian, ctx) == g.dimension
    assert Fraction(ctx.c) * Fraction(total_residue(ctx.F_omega, ctx).constant_value()) == 1


@pytest.mark.parametrize("spec", list(spec_range(3, 7)), ids=str)
def test_trace_identity_random(spec):
    ctx = ctx_for(spec)
    monos = list(monomials_up_to(Weighting.grassmannian(spec.k, spec.n), 2 * spec.dimension))
    rng = random.Random(17)
    for _ in range(20):
        F = WPolynomial.zero(spec.k)
        for _ in range(rng.randint(1, 4)):
            F = F + WPolynomial.monomial(rng.choice(monos), rng.randint(-4, 4), rng.randint(0, 1))
        ok, tr, res = trace_residue_check(F, ctx)
        assert ok, (F, tr, res)


@pytest.mark.parametrize("spec", list(spec_range(3, 7)), ids=str)
def test_forced_q_degree(spec):
    ctx = ctx_for(spec)
    w = Weighting.grassmannian(spec.k, spec.n)
    for e in monomials_up_to(w, 2 * spec.dimension + spec.n):
        r = total_residue(WPolynomial.monomial(e), ctx)
        wt = w.weight(e)
        if (wt - spec.dimension) % spec.n:
            assert r == 0
        elif r:
            assert r.q_degree() == (wt - spec.dimension) // spec.n and len(r) == 1


def test_normalization_examples():
    assert normalization_c(ctx_for(S24)) == 1
    for n in (2, 3, 4):
        assert normalization_c(ctx_for(GrassSpec(1, n))) == -1
    c23 = ctx_for(GrassSpec(2, 3))
    assert c23.F_omega == x2 == schur_polynomial(full_box(GrassSpec(2, 3)))
    assert normalization_c(c23) == 1
    alt = grassmannian_context(quantum_model(GrassSpec(2, 3)))
    alt.F_omega = alternate_point_class(GrassSpec(2, 3))
    assert alt.F_omega == -x2
    assert normalization_c(alt) == -1


@pytest.mark.parametrize("spec", list(spec_range(3, 7)), ids=str)
def test_point_class_representatives(spec):
    assert point_class(spec) == schur_polynomial(full_box(spec))
    same = (spec.k - 1) * (spec.n - spec.k) % 2 == 0
    assert (alternate_point_class(spec) == point_class(spec)) == same


def test_residue_invariant_examples():
    inv = genus_invariant_residue(WPolynomial.constant(2, 1), 1, ctx_for(S24))
    assert inv.reconciled == 6
    p12 = ctx_for(GrassSpec(1, 2))
    inv = genus_invariant_residue(WPolynomial.constant(1, 1), 1, p12)
    assert inv.raw == -2 and inv.reconciled == 2 and inv.exponent == 1
    assert genus_invariant_residue(p12.F_omega, 0, p12).reconciled == 1


@pytest.mark.parametrize("spec", list(spec_range(3, 7)), ids=str)
def test_residue_pipeline_matches_exact(spec):
    m = quantum_model(spec)
    ctx = grassmannian_context(m)
    rec = reconciliation(ctx)
    assert rec.epsilon == ctx.c
    w = Weighting.grassmannian(spec.k, spec.n)
    monos = list(monomials_up_to(w, 3 * spec.dimension))
    for e in random.Random(spec.n).sample(monos, min(len(monos), 25)):
        F = WPolynomial.monomial(e)
        for g in range(4):
            assert genus_invariant_residue(F, g, ctx).reconciled == genus_invariant_exact(F, g, m)


def test_sign_report_shape():
    rep = sign_report([S24, GrassSpec(2, 3)])
    json.dumps(rep)
    assert rep["schema"] == "qcg-report/1"
    row24, row23 = rep["models"]
    assert row24["c"] == "1" and row24["closed_form_prefactor"] == closed_form_prefactor(S24) == -1
    assert row23["c"] == "1" and row23["c_from_alternate_representative"] == "-1"
    assert all(r["all_probes_reconciled"] and r["epsilon_equals_c"] for r in rep["models"])

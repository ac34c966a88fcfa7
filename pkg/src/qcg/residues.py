"""Total residues of weighted Artinian complete intersections.

The quotient splits as R = R_{<N} + C*J with N = sum(deg g_i) - sum(d_i) and
J the Jacobian determinant; the total residue is the projection onto the
J-line, normalized so that Res(J) = dim R.  Everything is algebraic: the
residue of F is read off the coefficient of the unique top-weight basis
monomial in NF(F).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import InconsistencyError
from .grass import GrassSpec
from .qring import QuantumModel, RelationSystem, genus_invariant_exact
from .wpoly import GroebnerModel, WPolynomial, groebner_basis, trace
from .wpoly.poly import Weighting, determinant, monomials_up_to, norm_coeff


def jacobian(relations: Sequence[WPolynomial] | RelationSystem) -> WPolynomial:
    """det(d f_i / d X_j) for a square system."""
    rels = list(relations.relations) if isinstance(relations, RelationSystem) else list(relations)
    size = len(rels)
    nvars = rels[0].nvars
    if size != nvars:
        raise ValueError(f"{size} relations in {nvars} variables is not a square system")
    mat = [[f.derivative(j) for j in range(1, nvars + 1)] for f in rels]
    return determinant(mat, nvars)


@dataclass
class ResidueContext:
    model: GroebnerModel
    relations: tuple[WPolynomial, ...]
    jacobian: WPolynomial
    m_top: tuple
    j_top: object
    N: int
    F_omega: WPolynomial | None = None
    c: object = None
    quantum: QuantumModel | None = field(default=None, repr=False)
    _sign: "SignReconciliation | None" = field(default=None, repr=False)


def residue_context(relations: Sequence[WPolynomial], weighting: Weighting, q_mode="formal", *,
                    model: GroebnerModel | None = None, F_omega: WPolynomial | None = None) -> ResidueContext:
    """Build the residue data for an Artinian complete intersection."""
    relations = tuple(relations)
    if model is None:
        model = groebner_basis(list(relations), weighting, q_mode)
    N = sum(f.cohomological_degree(weighting) for f in relations) - sum(weighting.variable_weights)
    tops = model.top_monomials()
    if len(tops) != 1 or model.weight(tops[0]) != N:
        raise InconsistencyError(f"expected a unique basis monomial of weight {N}, found {tops}")
    m_top = tops[0]
    J = jacobian(relations)
    jt = model.normal_form(J).coefficient(m_top)
    if not jt.is_constant() or not jt:
        raise InconsistencyError(f"Jacobian top coefficient {jt} is not a nonzero constant")
    ctx = ResidueContext(model, relations, J, m_top, jt.constant_value(), N, F_omega)
    if F_omega is not None:
        ctx.c = normalization_c(ctx)
    return ctx


def point_class(spec: GrassSpec) -> WPolynomial:
    """sigma_{(n-k)^k} = e_k^{n-k} = (-1)^{k(n-k)} X_k^{n-k}, an exact polynomial identity."""
    k, n = spec.k, spec.n
    return WPolynomial.var(k, k) ** (n - k) * ((-1) ** (k * (n - k)))


def alternate_point_class(spec: GrassSpec) -> WPolynomial:
    """The representative (-1)^{n-k} X_k^{n-k}; off by (-1)^{(k-1)(n-k)} from the point class."""
    k, n = spec.k, spec.n
    return WPolynomial.var(k, k) ** (n - k) * ((-1) ** (n - k))


def grassmannian_context(m: QuantumModel) -> ResidueContext:
    """Residue context of G(k, n) normalized by the Jacobi-Trudi point class."""
    F_omega = point_class(m.spec)
    ctx = residue_context(m.system.relations, m.system.weighting, m.q_mode, model=m.groebner, F_omega=F_omega)
    ctx.quantum = m
    return ctx


def total_residue(F: WPolynomial, ctx: ResidueContext) -> WPolynomial:
    """Res(F) = dim * [m_top]NF(F) / j_top, as a polynomial in q."""
    top = ctx.model.normal_form(F).coefficient(ctx.m_top)
    return top.scale(Fraction(ctx.model.dimension) / ctx.j_top)


def trace_residue_check(F: WPolynomial, ctx: ResidueContext):
    """Compare tr(mult by F) with Res(F * J); returns (equal, trace, residue)."""
    tr = trace(ctx.model.mult_operator(F))
    res = total_residue(F * ctx.jacobian, ctx)
    return tr == res, tr, res


def normalization_c(ctx: ResidueContext):
    """c = 1 / Res(F_Omega), an exact rational."""
    if ctx.F_omega is None:
        raise ValueError("normalization needs a point-class representative")
    r = total_residue(ctx.F_omega, ctx)
    if not r:
        raise InconsistencyError("residue of the point class vanishes")
    if not r.is_constant():
        raise InconsistencyError(f"residue of the point class depends on q: {r}")
    return norm_coeff(1 / Fraction(r.constant_value()))


def closed_form_prefactor(spec: GrassSpec) -> int:
    """The closed-form sign (-1)^{n + k(k-1)/2} attached to the critical-point formula."""
    return (-1) ** (spec.n + spec.k * (spec.k - 1) // 2)


@dataclass
class SignReconciliation:
    spec: GrassSpec
    c: object
    epsilon: int
    exponent: int
    probes: list[dict]

    def as_dict(self) -> dict:
        return {
            "k": self.spec.k,
            "n": self.spec.n,
            "c": str(self.c),
            "closed_form_prefactor": closed_form_prefactor(self.spec),
            "reconciliation_exponent": self.exponent,
            "epsilon": self.epsilon,
            "probes": self.probes,
        }


def _raw_residue_invariant(F, g, ctx):
    v = F
    for _ in range(g):
        v = ctx.model.normal_form(v * ctx.jacobian)
    return total_residue(v, ctx).scale(ctx.c)


def default_probes(spec: GrassSpec) -> list[tuple[WPolynomial, int]]:
    k = spec.k
    one = WPolynomial.constant(k, 1)
    x1 = WPolynomial.var(k, 1)
    probes = [(one, 1), (one, 2), (x1, 1), (x1 ** spec.n, 1), (one, 3)]
    N = spec.dimension
    for e in monomials_up_to(Weighting.grassmannian(k, spec.n), N + spec.n):
        if sum(e):
            probes.append((WPolynomial.monomial(e), 1 + (sum(e) % 2)))
        if len(probes) >= 12:
            break
    return probes


def sign_reconciliation(ctx: ResidueContext, probes=None) -> SignReconciliation:
    """Find epsilon in {+1, -1} with c * epsilon^g * Res(J^g F) = <F>_g on every probe."""
    m = ctx.quantum
    if m is None:
        raise ValueError("sign reconciliation needs the quantum model")
    probes = probes or default_probes(m.spec)
    table = []
    fits = {1: True, -1: True}
    for F, g in probes:
        exact = genus_invariant_exact(F, g, m)
        raw = _raw_residue_invariant(F, g, ctx)
        row = {"poly": str(F), "genus": g, "exact": str(exact), "raw_residue": str(raw)}
        for eps in (1, -1):
            ok = raw.scale(eps ** g) == exact
            row[f"eps{'+' if eps > 0 else '-'}"] = ok
            fits[eps] = fits[eps] and ok
        table.append(row)
    good = [eps for eps in (1, -1) if fits[eps]]
    if len(good) != 1:
        lines = "\n".join(str(r) for r in table)
        raise InconsistencyError(f"no unique sign reconciliation for {m.spec}:\n{lines}")
    eps = good[0]
    return SignReconciliation(m.spec, ctx.c, eps, 0 if eps == 1 else 1, table)


def reconciliation(ctx: ResidueContext) -> SignReconciliation:
    if ctx._sign is None:
        ctx._sign = sign_reconciliation(ctx)
    return ctx._sign


@dataclass
class ResidueInvariant:
    raw: WPolynomial
    reconciled: WPolynomial
    exponent: int


def genus_invariant_residue(F: WPolynomial, g: int, ctx: ResidueContext) -> ResidueInvariant:
    """c * Res(J^g F), raw and after the model's sign reconciliation."""
    if ctx.c is None:
        raise ValueError("context has no normalization constant")
    raw = _raw_residue_invariant(F, g, ctx)
    rec = reconciliation(ctx)
    return ResidueInvariant(raw, raw.scale(rec.epsilon ** g), rec.exponent)


def sign_report(specs) -> dict:
    """The sign-reconciliation report for a set of Grassmannians."""
    from .qring import quantum_model

    rows = []
    for spec in specs:
        ctx = grassmannian_context(quantum_model(spec))
        rec = reconciliation(ctx)
        d = rec.as_dict()
        d["alignment_sign"] = (-1) ** (spec.k * (spec.k - 1) // 2)
        alt = total_residue(alternate_point_class(spec), ctx)
        d["c_from_alternate_representative"] = str(norm_coeff(1 / Fraction(alt.constant_value())))
        d["c_matches_closed_form"] = Fraction(ctx.c) == closed_form_prefactor(spec)
        d["epsilon_equals_c"] = Fraction(ctx.c) == rec.epsilon
        d["all_probes_reconciled"] = all(r[f"eps{'+' if rec.epsilon > 0 else '-'}"] for r in rec.probes)
        rows.append(d)
    return {"schema": "qcg-report/1", "kind": "sign-reconciliation", "models": rows}

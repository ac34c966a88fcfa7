"""The quantum cohomology ring of G(k, n) in the Schubert basis.

The ring is Q[q][X_1..X_k] / (Y_{n-k+1}, ..., Y_{n-1}, Y_n + (-1)^k q),
with X_i = c_i(S).  The hyperplane class is s_1 = -X_1.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .errors import InconsistencyError, SpecError
from .grass import GrassSpec
from .schubert import (
    BoxPartition,
    SchubertBasis,
    SchubertVector,
    classical_product,
    dual_partition,
    full_box,
    schubert_basis,
    segre_classes,
)
from .wpoly import FORMAL, GroebnerModel, Weighting, WPolynomial, groebner_basis, initial_form
from .wpoly.poly import norm_coeff


def _qmode(q_mode):
    if q_mode is None or q_mode == FORMAL:
        return FORMAL
    return norm_coeff(Fraction(q_mode))


@dataclass(frozen=True)
class RelationSystem:
    spec: GrassSpec
    relations: tuple[WPolynomial, ...]
    classical_relations: tuple[WPolynomial, ...]
    q_mode: object = FORMAL
    weighting: Weighting = field(default=None)

    def degrees(self) -> list[int]:
        return [f.cohomological_degree(self.weighting) for f in self.relations]


def theorem_relations(spec: GrassSpec) -> list[WPolynomial]:
    """f_i = Y_{n-k+i} for i < k and f_k = Y_n + (-1)^k q, with q formal."""
    k, n = spec.k, spec.n
    ys = segre_classes(k, n)
    rels = [ys[n - k + i] for i in range(1, k)]
    rels.append(ys[n] + WPolynomial.q(k).scale((-1) ** k))
    return rels


def build_relations(spec: GrassSpec, q_mode=FORMAL, *, corrupt: bool = False) -> RelationSystem:
    """Quantum relations for G(k, n); ``corrupt`` adds 1 to one coefficient (negative control)."""
    q_mode = _qmode(q_mode)
    w = Weighting.grassmannian(spec.k, spec.n)
    rels = theorem_relations(spec)
    if corrupt:
        f = rels[0]
        e, c = f.sorted_items()[-1]
        rels[0] = f + WPolynomial(spec.k, {e: 1})
    classical = tuple(initial_form(f, w) for f in rels)
    expected = segre_classes(spec.k, spec.n)[spec.n - spec.k + 1:]
    if not corrupt and list(classical) != list(expected):
        raise InconsistencyError("initial forms differ from the classical Segre relations")
    if q_mode != FORMAL:
        rels = [f.subs_q(q_mode) for f in rels]
    return RelationSystem(spec, tuple(rels), classical, q_mode, w)


class QuantumModel:
    """Quotient model of the quantum ring plus Schubert data and the handle element."""

    def __init__(self, system: RelationSystem):
        self.system = system
        self.spec = system.spec
        self.groebner: GroebnerModel = groebner_basis(list(system.relations), system.weighting, system.q_mode)
        self.basis: SchubertBasis = schubert_basis(self.spec, self.groebner)
        self.partitions = self.basis.partitions
        self.schur_images = self.basis.images
        self._products: dict = {}
        self.handle_poly = self._handle_poly()
        self.handle_element: SchubertVector = self.to_vector(self.handle_poly)
        self._handle_columns = None

    @property
    def q_mode(self):
        return self.system.q_mode

    @property
    def formal(self) -> bool:
        return self.q_mode == FORMAL

    @property
    def dimension(self) -> int:
        return self.groebner.dimension

    def to_vector(self, F: WPolynomial) -> SchubertVector:
        return self.basis.to_vector(F)

    def poly(self, vec: SchubertVector) -> WPolynomial:
        return self.basis.to_polynomial(vec)

    def partition(self, parts) -> BoxPartition:
        return BoxPartition(tuple(parts), self.spec)

    def _handle_poly(self) -> WPolynomial:
        g = self.groebner
        total = WPolynomial.zero(self.spec.k)
        for lam in self.partitions:
            total = total + g.multiply(self.schur_images[lam], self.schur_images[dual_partition(lam)])
        return total

    def basis_product(self, lam: BoxPartition, mu: BoxPartition) -> SchubertVector:
        key = (lam, mu) if lam.sort_key() <= mu.sort_key() else (mu, lam)
        hit = self._products.get(key)
        if hit is None:
            prod = self.groebner.multiply(self.schur_images[lam], self.schur_images[mu])
            hit = self._products[key] = self.to_vector(prod)
        return hit

    def multiply_by_handle(self, v: WPolynomial) -> WPolynomial:
        """E * v for v supported on the quotient basis."""
        g = self.groebner
        if self._handle_columns is None:
            self._handle_columns = {b: dict(g.multiply(self.handle_poly, WPolynomial.monomial(b)).items())
                                    for b in g.quotient_basis}
        acc: dict = {}
        for e, c in v.items():
            qs = e[-1]
            for e2, c2 in self._handle_columns[e[:-1]].items():
                key = e2[:-1] + (e2[-1] + qs,)
                acc[key] = acc.get(key, 0) + c * c2
        return WPolynomial(v.nvars, {e: c for e, c in acc.items() if c})

    def __repr__(self):
        return f"QuantumModel({self.spec}, q={self.q_mode}, dim={self.dimension})"


@lru_cache(maxsize=64)
def _cached_model(k: int, n: int, q_mode, corrupt: bool) -> QuantumModel:
    return QuantumModel(build_relations(GrassSpec(k, n), q_mode, corrupt=corrupt))


def quantum_model(spec: GrassSpec, q_mode=FORMAL, *, corrupt: bool = False) -> QuantumModel:
    """Build (and memoize) the quantum model of G(k, n)."""
    return _cached_model(spec.k, spec.n, _qmode(q_mode), corrupt)


def quantum_product(a: SchubertVector, b: SchubertVector, m: QuantumModel) -> SchubertVector:
    if a.spec != m.spec or b.spec != m.spec:
        raise SpecError(f"spec mismatch: {a.spec}, {b.spec} vs model {m.spec}")
    total = SchubertVector(m.spec)
    for lam, ca in a.items():
        for mu, cb in b.items():
            total = total + m.basis_product(lam, mu).scale(ca * cb)
    return total


def _dim_condition(spec: GrassSpec, total: int):
    extra = total - spec.dimension
    if extra < 0 or extra % spec.n:
        return None
    return extra // spec.n


def gw3(lam: BoxPartition, mu: BoxPartition, nu: BoxPartition, d: int, m: QuantumModel) -> int:
    """Genus-0 three-point invariant: coefficient of q^d sigma_{nu*} in sigma_lam * sigma_mu."""
    spec = m.spec
    if d < 0 or lam.size + mu.size + nu.size != spec.dimension + d * spec.n:
        return 0
    coef = m.basis_product(lam, mu).coefficient(dual_partition(nu))
    if m.formal:
        value = coef.terms.get((d,), 0)
    else:
        # homogeneity: only q^d can contribute, so rescale the specialized value
        value = Fraction(coef.constant_value() if coef else 0) / Fraction(m.q_mode) ** d
    value = norm_coeff(Fraction(value))
    if not isinstance(value, int):
        raise InconsistencyError(f"non-integer structure constant {value}")
    return value


def genus_invariant_exact(F: WPolynomial, g: int, m: QuantumModel) -> WPolynomial:
    """<F>_g: coefficient of the point class in E^g * F, E the handle element."""
    if g < 0:
        raise ValueError("genus must be non-negative")
    v = m.groebner.normal_form(F)
    for _ in range(g):
        v = m.multiply_by_handle(v)
    return m.to_vector(v).coefficient(full_box(m.spec))


def three_point(a: BoxPartition, b: BoxPartition, c: BoxPartition, m: QuantumModel) -> WPolynomial:
    """q-weighted genus-0 three-point function: sum_d gw3(a, b, c, d) q^d."""
    return m.basis_product(a, b).coefficient(dual_partition(c))


@dataclass
class SelfCheckReport:
    spec: GrassSpec
    checks: dict[str, bool]
    details: dict[str, str]

    @property
    def passed(self) -> bool:
        return all(self.checks.values())


def ring_selfcheck(m: QuantumModel, *, samples: int = 100, seed: int = 0, raise_on_failure: bool = True) -> SelfCheckReport:
    """Relations vanish, associativity on all basis triples, Poincare pairing,
    and the four-point composition law on random tuples."""
    spec = m.spec
    g = m.groebner
    checks: dict[str, bool] = {}
    details: dict[str, str] = {}

    # (a) relations recomputed from scratch vanish in the model's ring
    fresh = theorem_relations(spec)
    if not m.formal:
        fresh = [f.subs_q(m.q_mode) for f in fresh]
    bad = [str(f) for f in fresh if g.normal_form(f)]
    checks["relations_vanish"] = not bad
    if bad:
        details["relations_vanish"] = f"nonzero normal form of {bad[0]}"

    parts = m.partitions
    # (b) associativity over every basis triple
    ok = True
    for a in parts:
        for b in parts:
            ab = m.basis_product(a, b)
            for c in parts:
                left = SchubertVector(spec)
                for nu, coef in ab.items():
                    left = left + m.basis_product(nu, c).scale(coef)
                bc = m.basis_product(b, c)
                right = SchubertVector(spec)
                for nu, coef in bc.items():
                    right = right + m.basis_product(a, nu).scale(coef)
                if left != right:
                    ok = False
                    details["associativity"] = f"({a}*{b})*{c} = {left} but {a}*({b}*{c}) = {right}"
                    break
            if not ok:
                break
        if not ok:
            break
    checks["associativity"] = ok

    # (c) Poincare pairing is the permutation matrix of duality
    top = full_box(spec)
    ok = True
    for a in parts:
        for b in parts:
            val = m.basis_product(a, b).coefficient(top)
            want = 1 if b == dual_partition(a) else 0
            if not m.formal and val:
                val = WPolynomial.constant(0, val.constant_value())
            if val != want:
                ok = False
                details["poincare_pairing"] = f"<{a},{b}> = {val}, expected {want}"
                break
        if not ok:
            break
    checks["poincare_pairing"] = ok

    # (d) composition law for four-point invariants, split r = 2
    rng = random.Random(seed)
    ok = True
    for _ in range(samples):
        b1, b2, b3, b4 = (rng.choice(parts) for _ in range(4))
        direct = g.multiply(g.multiply(m.schur_images[b1], m.schur_images[b2]),
                            g.multiply(m.schur_images[b3], m.schur_images[b4]))
        lhs = m.to_vector(direct).coefficient(top)
        rhs = WPolynomial.zero(0)
        rhs_alt = WPolynomial.zero(0)
        for lam in parts:
            lam_d = dual_partition(lam)
            rhs = rhs + three_point(b1, b2, lam, m) * three_point(lam_d, b3, b4, m)
            rhs_alt = rhs_alt + three_point(b1, b3, lam, m) * three_point(lam_d, b2, b4, m)
        if not (lhs == rhs == rhs_alt):
            ok = False
            details["composition_law"] = f"({b1},{b2},{b3},{b4}): direct {lhs}, split {rhs}, alt split {rhs_alt}"
            break
    checks["composition_law"] = ok

    # q^0 part of every product equals the classical Pieri-oracle product
    ok = True
    if m.formal:
        for i, a in enumerate(parts):
            for b in parts[i:]:
                if m.basis_product(a, b).q_part(0) != classical_product(a, b):
                    ok = False
                    details["classical_limit"] = f"q^0 part of {a}*{b} differs from Pieri"
                    break
            if not ok:
                break
    checks["classical_limit"] = ok

    report = SelfCheckReport(spec, checks, details)
    if raise_on_failure and not report.passed:
        failed = [k for k, v in checks.items() if not v]
        raise InconsistencyError(f"{spec} self-check failed: {failed[0]}: {details.get(failed[0], '')}")
    return report

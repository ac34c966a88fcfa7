"""Landau-Ginzburg critical points and the critical-point sum for higher-genus
invariants, with exact reconstruction of the q-dependence.

Roots z_1..z_k satisfy z_i^n = (-1)^{k+1} q and map to X-coordinates
X_i = (-1)^i e_i(z).  The relations are the gradient of a potential W up to
reversing their order: dW/dX_i = f_{k+1-i}.
"""
from __future__ import annotations

import os
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import comb

import mpmath

from .errors import InconsistencyError, PrecisionError, SpecError
from .grass import GrassSpec
from .qring import build_relations, quantum_model
from .wpoly import WPolynomial
from .wpoly.poly import Weighting

DEFAULT_PRECISION = 60
SNAP_TOLERANCE = mpmath.mpf("1e-30")
MAX_ESCALATION = 3


def default_precision() -> int:
    return int(os.environ.get("QCG_PRECISION", DEFAULT_PRECISION))


# potential ----------------------------------------------------------------

def aligned_gradient(spec: GrassSpec) -> list[WPolynomial]:
    """The relations reordered so that entry i is dW/dX_i."""
    rels = list(build_relations(spec).relations)
    return rels[::-1]


def integrate_gradient(grad: list[WPolynomial]) -> WPolynomial:
    """W with dW/dX_i = grad[i], via the radial line integral; q is a constant."""
    nvars = grad[0].nvars
    terms: dict = {}
    for i, g in enumerate(grad):
        for e, c in g.items():
            deg = sum(e[:-1])
            ne = list(e)
            ne[i] += 1
            key = tuple(ne)
            terms[key] = terms.get(key, 0) + Fraction(c) / (deg + 1)
    return WPolynomial(nvars, terms)


def potential(spec: GrassSpec) -> WPolynomial:
    return integrate_gradient(aligned_gradient(spec))


@dataclass
class LGConsistency:
    spec: GrassSpec
    symmetric_partials: bool
    gradient_matches: bool
    numeric_agreement: bool
    max_numeric_error: float

    @property
    def ok(self) -> bool:
        return self.symmetric_partials and self.gradient_matches and self.numeric_agreement


def lg_consistency(spec: GrassSpec, *, probes: int = 50, seed: int = 0, precision: int = 40) -> LGConsistency:
    """Check that the relations integrate to the potential W and that W pulled
    back to roots is -sum(z^{n+1}/(n+1) + (-1)^k q z)."""
    k, n = spec.k, spec.n
    grad = aligned_gradient(spec)
    sym = all(
        grad[i].derivative(j + 1) == grad[j].derivative(i + 1)
        for i in range(k) for j in range(i + 1, k)
    )
    W = integrate_gradient(grad)
    matches = all(W.derivative(i + 1) == grad[i] for i in range(k))
    worst = mpmath.mpf(0)
    r = random.Random(seed)
    with mpmath.workdps(precision):
        for _ in range(probes):
            z = [mpmath.mpc(r.uniform(-1, 1), r.uniform(-1, 1)) for _ in range(k)]
            q = mpmath.mpc(r.uniform(-2, 2), r.uniform(-2, 2))
            x = roots_to_x(z)
            lhs = W.evaluate(x, q, one=mpmath.mpc(1))
            rhs = -sum(zi ** (n + 1) / (n + 1) + (-1) ** k * q * zi for zi in z)
            worst = max(worst, abs(lhs - rhs))
        ok = worst < mpmath.mpf(10) ** (-(precision - 10))
    return LGConsistency(spec, sym, matches, bool(ok), float(worst))


# critical points ----------------------------------------------------------

def elementary_symmetric(z) -> list:
    """e_0..e_k of the values z."""
    e = [mpmath.mpc(1)] + [mpmath.mpc(0)] * len(z)
    for zi in z:
        for j in range(len(z), 0, -1):
            e[j] = e[j] + e[j - 1] * zi
    return e


def roots_to_x(z) -> list:
    e = elementary_symmetric(z)
    return [(-1) ** i * e[i] for i in range(1, len(z) + 1)]


@dataclass
class CriticalPoint:
    roots: tuple
    x: tuple
    jac_value: object
    hess_value: object
    q: object
    residual: object
    precision: int
    _powers: dict = field(default_factory=dict, repr=False)

    def power(self, i: int, e: int):
        key = (i, e)
        p = self._powers.get(key)
        if p is None:
            p = self._powers[key] = self.x[i] ** e
        return p

    def evaluate(self, F: WPolynomial):
        """F at this point (q substituted by the sample value)."""
        total = mpmath.mpc(0)
        for e, c in F.items():
            v = mpmath.mpf(c) if isinstance(c, int) else mpmath.mpf(c.numerator) / c.denominator
            for i, ei in enumerate(e[:-1]):
                if ei:
                    v = v * self.power(i, ei)
            if e[-1]:
                v = v * self.q ** e[-1]
            total += v
        return total


@lru_cache(maxsize=None)
def _symbolic_matrices(k: int, n: int):
    spec = GrassSpec(k, n)
    rels = list(build_relations(spec).relations)
    jac = [[f.derivative(j) for j in range(1, k + 1)] for f in rels]
    W = potential(spec)
    hess = [[W.derivative(i).derivative(j) for j in range(1, k + 1)] for i in range(1, k + 1)]
    return rels, jac, hess


def _det_at(mat, x, q):
    one = mpmath.mpc(1)
    m = mpmath.matrix([[entry.evaluate(x, q, one=one) for entry in row] for row in mat])
    return mpmath.det(m)


def _as_mp(q_value):
    if isinstance(q_value, (int, Fraction)):
        return mpmath.mpf(Fraction(q_value).numerator) / Fraction(q_value).denominator
    return mpmath.mpmathify(q_value)


def _critical_points_at(spec: GrassSpec, q_value, precision: int) -> list[CriticalPoint]:
    k, n = spec.k, spec.n
    rels, jac, hess = _symbolic_matrices(k, n)
    with mpmath.workdps(precision):
        q = _as_mp(q_value)
        rho = (-1) ** (k + 1) * q
        base = mpmath.root(mpmath.mpc(rho), n)
        unity = [mpmath.expjpi(mpmath.mpf(2 * m) / n) for m in range(n)]
        roots = [base * u for u in unity]
        subsets = sorted(combinations(range(n), k), key=lambda s: tuple(reversed(s)))
        tol = mpmath.mpf(10) ** (-(precision - 10))
        points = []
        for sub in subsets:
            z = tuple(roots[m] for m in sub)
            x = tuple(roots_to_x(z))
            qc = mpmath.mpc(q)
            residual = max(abs(f.evaluate(x, qc, one=mpmath.mpc(1))) for f in rels)
            if residual > tol:
                raise PrecisionError(f"{spec}: relation residual {mpmath.nstr(residual, 5)} at precision {precision}")
            jv = _det_at(jac, x, qc)
            hv = _det_at(hess, x, qc)
            points.append(CriticalPoint(z, x, jv, hv, qc, residual, precision))
        sep = mpmath.mpf(10) ** (-precision / 2)
        for a, b in combinations(points, 2):
            if max(abs(u - v) for u, v in zip(a.x, b.x)) <= sep:
                raise PrecisionError(f"{spec}: critical points not separated")
        for p in points:
            if abs(p.hess_value) <= tol:
                raise InconsistencyError(f"{spec}: degenerate critical point {p.x}")
    return points


@lru_cache(maxsize=256)
def _cached_points(k, n, q_value, precision):
    return tuple(_critical_points_at(GrassSpec(k, n), q_value, precision))


def critical_points(spec: GrassSpec, q_value=1, precision: int | None = None) -> list[CriticalPoint]:
    """All C(n, k) critical points for a nonzero q, escalating precision on failure."""
    precision = precision or default_precision()
    if q_value == 0:
        raise SpecError("q = 0 is degenerate: the critical points collapse")
    key = Fraction(q_value) if isinstance(q_value, (int, Fraction)) else q_value
    last = None
    for step in range(MAX_ESCALATION):
        try:
            pts = list(_cached_points(spec.k, spec.n, key, precision + 20 * step))
            if len(pts) != comb(spec.n, spec.k):
                raise InconsistencyError(f"expected {comb(spec.n, spec.k)} critical points, got {len(pts)}")
            return pts
        except PrecisionError as exc:
            last = exc
    raise PrecisionError(f"{last}; the critical-equation sign convention may be wrong")


def alignment_sign(k: int) -> int:
    """Hessian of W over the Jacobian of (f_1..f_k): the sign of reversing k rows."""
    return (-1) ** (k * (k - 1) // 2)


# critical-point sums ------------------------------------------------------

def vi_sum(F: WPolynomial, g: int, points, c, sign_exponent: int):
    """c * (-1)^(g*sign_exponent) * sum_x J(x)^(g-1) F(x), J the relation Jacobian
    (= alignment sign times the Hessian of W)."""
    prec = max(p.precision for p in points)
    with mpmath.workdps(prec):
        total = mpmath.mpc(0)
        for p in points:
            total += p.jac_value ** (g - 1) * p.evaluate(F)
        cf = Fraction(c)
        return total * (mpmath.mpf(cf.numerator) / cf.denominator) * (-1) ** (g * sign_exponent)


def real_part_checked(value, tol=None):
    tol = SNAP_TOLERANCE if tol is None else tol
    if abs(mpmath.im(value)) > tol * max(1, abs(value)):
        raise PrecisionError(f"critical-point sum has imaginary part {mpmath.nstr(mpmath.im(value), 5)}")
    return mpmath.re(value)


@lru_cache(maxsize=None)
def lg_constants(k: int, n: int):
    """(c, sign_exponent) taken from the residue pipeline."""
    from .residues import grassmannian_context, reconciliation

    ctx = grassmannian_context(quantum_model(GrassSpec(k, n)))
    return ctx.c, reconciliation(ctx).exponent


def degree_bound(F: WPolynomial, g: int, spec: GrassSpec) -> int:
    w = Weighting.grassmannian(spec.k, spec.n)
    weight = F.homogeneous_degree(w) if F else 0
    return (weight + (g - 1) * spec.dimension) // spec.n


@dataclass
class QReconstruction:
    poly: WPolynomial
    raw: list
    residual: object
    precision: int
    samples: list


def reconstruct_q_polynomial(F: WPolynomial, g: int, spec: GrassSpec, sample_count: int | None = None,
                             precision: int | None = None, *, snap_tol=None) -> QReconstruction:
    """Evaluate the critical-point sum at q = 1, 2, ..., interpolate, and snap to integers."""
    precision = precision or default_precision()
    snap_tol = SNAP_TOLERANCE if snap_tol is None else mpmath.mpf(snap_tol)
    c, sexp = lg_constants(spec.k, spec.n)
    d_max = degree_bound(F, g, spec)
    if d_max < 0:
        pts = critical_points(spec, 1, precision)
        with mpmath.workdps(pts[0].precision):
            v = vi_sum(F, g, pts, c, sexp)
            if abs(v) > snap_tol:
                raise InconsistencyError(f"expected a vanishing invariant, critical-point sum is {mpmath.nstr(v, 8)}")
        return QReconstruction(WPolynomial.zero(0), [], abs(v), precision, [1])
    m = sample_count or d_max + 2
    if m <= d_max:
        raise SpecError(f"need more than {d_max} samples, got {m}")
    last = None
    for step in range(MAX_ESCALATION):
        prec = precision + 20 * step
        try:
            return _reconstruct(F, g, spec, m, d_max, prec, c, sexp, snap_tol)
        except PrecisionError as exc:
            last = exc
    raise last


def _reconstruct(F, g, spec, m, d_max, prec, c, sexp, snap_tol):
    qs = list(range(1, m + 1))
    with mpmath.workdps(prec):
        values = []
        for qv in qs:
            pts = critical_points(spec, qv, prec)
            values.append(real_part_checked(vi_sum(F, g, pts, c, sexp)))
        size = d_max + 1
        A = mpmath.matrix([[mpmath.mpf(qv) ** j for j in range(size)] for qv in qs[:size]])
        b = mpmath.matrix(values[:size])
        raw = mpmath.lu_solve(A, b)
        coeffs = [int(mpmath.nint(raw[j])) for j in range(size)]
        residual = max(abs(raw[j] - coeffs[j]) for j in range(size))
        for qv, val in zip(qs, values):
            pred = sum(cj * qv ** j for j, cj in enumerate(coeffs))
            residual = max(residual, abs(val - pred))
        if residual >= snap_tol:
            raise PrecisionError(
                f"snap residual {mpmath.nstr(residual, 5)} exceeds tolerance; raw coefficients "
                + ", ".join(mpmath.nstr(raw[j], 20) for j in range(size))
            )
        poly = WPolynomial.qpoly({j: cj for j, cj in enumerate(coeffs) if cj})
        return QReconstruction(poly, [raw[j] for j in range(size)], residual, prec, qs)

"""Buchberger's algorithm and finite-dimensional quotient models.

Coefficients live in Q (specialized q) or Q[q] (formal q).  In formal mode
the X-monomial order alone drives the reduction and q rides along inside
the coefficients; this only works while every leading coefficient is a
q-free constant, which holds for the Grassmannian relations.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence

from ..errors import FormalModeUnavailable, InfiniteQuotientError
from .poly import Weighting, WPolynomial, norm_coeff

FORMAL = "formal"


@dataclass(frozen=True)
class MonomialOrder:
    """Weight-graded reverse lexicographic order on X-exponents.

    Ties in weight are broken revlex with X_k as the last variable, so a
    higher power of X_k makes a monomial smaller (X_1^3 > X_1 X_2 at weight 3).
    """

    weights: tuple[int, ...]
    name: str = "wgrevlex"

    def key(self, xexp):
        return (sum(w * e for w, e in zip(self.weights, xexp)), tuple(-e for e in reversed(xexp)))

    def weight(self, xexp) -> int:
        return sum(w * e for w, e in zip(self.weights, xexp))


def _divides(a, b) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def _minus(a, b):
    return tuple(x - y for x, y in zip(a, b))


# Internal representation: {xexp: {qdeg: coeff}} ---------------------------

def _to_internal(p: WPolynomial) -> dict:
    out: dict = {}
    for e, c in p.items():
        out.setdefault(e[:-1], {})[e[-1]] = c
    return out


def _from_internal(nvars: int, d: dict) -> WPolynomial:
    return WPolynomial(nvars, {x + (qd,): c for x, qc in d.items() for qd, c in qc.items()})


def _content(d: dict) -> int:
    g = 0
    for qc in d.values():
        for c in qc.values():
            g = gcd(g, c)
            if g == 1:
                return 1
    return g


def _primitive(d: dict, lead) -> dict:
    """Integer coefficients, unit content, positive leading coefficient."""
    den = 1
    for qc in d.values():
        for c in qc.values():
            if isinstance(c, Fraction):
                den = den * c.denominator // gcd(den, c.denominator)
    if den != 1:
        d = {x: {qd: int(c * den) for qd, c in qc.items()} for x, qc in d.items()}
    g = _content(d)
    lc = d[lead]
    sign = -1 if lc[max(lc)] < 0 else 1
    if g != 1 or sign != 1:
        f = g * sign
        d = {x: {qd: c // f for qd, c in qc.items()} for x, qc in d.items()}
    return d


def _scale_into(p: dict, a) -> None:
    if a == 1:
        return
    for qc in p.values():
        for qd in qc:
            qc[qd] *= a


def _submul(p: dict, cq: dict, shift, g: dict) -> None:
    """p -= cq(q) * X^shift * g, in place."""
    for gx, gqc in g.items():
        x = tuple(a + b for a, b in zip(gx, shift))
        tgt = p.get(x)
        if tgt is None:
            tgt = p[x] = {}
        for d1, c1 in cq.items():
            for d2, c2 in gqc.items():
                dd = d1 + d2
                v = tgt.get(dd, 0) - c1 * c2
                if v:
                    tgt[dd] = v
                else:
                    tgt.pop(dd, None)
        if not tgt:
            del p[x]


def _lead_const(qc: dict, formal: bool):
    if len(qc) != 1 or 0 not in qc:
        raise FormalModeUnavailable(
            "formal mode unavailable, use specialization "
            f"(q-dependent leading coefficient {qc})"
        )
    return qc[0]


class _Reducer:
    def __init__(self, order: MonomialOrder, formal: bool):
        self.order = order
        self.formal = formal
        self.basis: list[dict] = []
        self.leads: list[tuple] = []
        self.lcs: list = []

    def lead(self, p: dict):
        return max(p, key=self.order.key)

    def add(self, g: dict):
        lm = self.lead(g)
        lc = _lead_const(g[lm], self.formal)
        self.basis.append(g)
        self.leads.append(lm)
        self.lcs.append(lc)
        return len(self.basis) - 1

    def find(self, m, skip=None):
        for i, lm in enumerate(self.leads):
            if i != skip and lm is not None and _divides(lm, m):
                return i
        return None

    def reduce_fraction_free(self, p: dict, active=None) -> dict:
        """Full reduction with integer arithmetic; result made primitive."""
        p = {x: dict(qc) for x, qc in p.items()}
        r: dict = {}
        key = self.order.key
        while p:
            m = max(p, key=key)
            i = None
            for j, lm in enumerate(self.leads):
                if (active is None or j in active) and lm is not None and _divides(lm, m):
                    i = j
                    break
            if i is None:
                r[m] = p.pop(m)
                continue
            lc = self.lcs[i]
            cq = p[m]
            g0 = gcd(lc, _content({m: cq}))
            a = lc // g0
            cq = {d: c // g0 for d, c in cq.items()}
            _scale_into(p, a)
            _scale_into(r, a)
            _submul(p, cq, _minus(m, self.leads[i]), self.basis[i])
            p.pop(m, None)
        if not r:
            return r
        return _primitive(r, self.lead(r))


def _spoly(f: dict, lf, cf, g: dict, lg, cg) -> dict:
    l = _lcm(lf, lg)
    c = gcd(cf, cg)
    out = {x: {d: v * (cg // c) for d, v in qc.items()} for x, qc in f.items()}
    out = {tuple(a + b for a, b in zip(x, _minus(l, lf))): qc for x, qc in out.items()}
    _submul(out, {0: cf // c}, _minus(l, lg), g)
    out.pop(l, None)
    return out


def buchberger(gens: Sequence[WPolynomial], order: MonomialOrder, formal: bool) -> list[dict]:
    """Reduced Gröbner basis (internal form) with the sugar selection strategy."""
    red = _Reducer(order, formal)
    sugar: list[int] = []
    pairs: list[tuple[int, int, int, tuple]] = []
    wt = order.weight

    def insert(h: dict, s: int):
        lm_h = red.lead(h)
        new = red.add(h)
        sugar.append(s)
        # Gebauer-Moeller B-criterion: drop pairs whose lcm is divisible by lm_h strictly.
        keep = []
        for (i, j, ps, l) in pairs:
            if _divides(lm_h, l) and _lcm(red.leads[i], lm_h) != l and _lcm(red.leads[j], lm_h) != l:
                continue
            keep.append((i, j, ps, l))
        pairs[:] = keep
        for i in range(new):
            if red.leads[i] is None:
                continue
            li = red.leads[i]
            l = _lcm(li, lm_h)
            if all(a == 0 or b == 0 for a, b in zip(li, lm_h)):
                continue  # coprime leading monomials
            ps = max(sugar[i] - wt(li), s - wt(lm_h)) + wt(l)
            pairs.append((i, new, ps, l))
        # leading monomials made redundant no longer generate pairs but stay reducers
        return new

    for f in gens:
        d = _to_internal(f)
        if not d:
            continue
        d = red.reduce_fraction_free(_primitive(d, red.lead(d)))
        if d:
            insert(d, max(wt(x) for x in d))

    while pairs:
        pairs.sort(key=lambda t: (t[2], order.key(t[3])))
        i, j, ps, l = pairs.pop(0)
        s = _spoly(red.basis[i], red.leads[i], red.lcs[i], red.basis[j], red.leads[j], red.lcs[j])
        if not s:
            continue
        h = red.reduce_fraction_free(s)
        if h:
            insert(h, ps)

    # minimalize and interreduce
    idx = list(range(len(red.basis)))
    minimal = []
    for i in idx:
        li = red.leads[i]
        if any(j != i and _divides(red.leads[j], li) and (red.leads[j] != li or j < i) for j in idx):
            continue
        minimal.append(i)
    final_red = _Reducer(order, formal)
    for i in minimal:
        final_red.add(red.basis[i])
    out = []
    for pos in range(len(minimal)):
        g = final_red.basis[pos]
        lm = final_red.leads[pos]
        tail = {x: qc for x, qc in g.items() if x != lm}
        others = set(range(len(minimal))) - {pos}
        tail_red = _reduce_tail(final_red, tail, others)
        # rescale head consistently with the fraction-free tail reduction
        head_scale, tail_poly = tail_red
        newg = {lm: {d: c * head_scale for d, c in g[lm].items()}}
        for x, qc in tail_poly.items():
            newg[x] = qc
        out.append(_primitive(newg, lm))
    out.sort(key=lambda d: order.key(max(d, key=order.key)))
    return out


def _reduce_tail(red: _Reducer, tail: dict, active: set):
    """Reduce every term of ``tail``; returns (scale, reduced) with reduced = scale * tail mod basis."""
    p = {x: dict(qc) for x, qc in tail.items()}
    r: dict = {}
    scale = 1
    key = red.order.key
    while p:
        m = max(p, key=key)
        i = next((j for j in sorted(active) if _divides(red.leads[j], m)), None)
        if i is None:
            r[m] = p.pop(m)
            continue
        lc = red.lcs[i]
        cq = p[m]
        g0 = gcd(lc, _content({m: cq}))
        a = lc // g0
        cq = {d: c // g0 for d, c in cq.items()}
        _scale_into(p, a)
        _scale_into(r, a)
        scale *= a
        _submul(p, cq, _minus(m, red.leads[i]), red.basis[i])
        p.pop(m, None)
    return scale, r


class GroebnerModel:
    """Reduced basis of an Artinian ideal together with its quotient model.

    ``q_mode`` is ``"formal"`` or the rational value substituted for q.
    Normal forms are supported on ``quotient_basis`` (standard monomials,
    sorted by weight and then descending in the monomial order).
    """

    def __init__(self, generators, reduced_basis, order, quotient_basis, q_mode, weighting):
        self.generators = tuple(generators)
        self.reduced_basis = tuple(reduced_basis)
        self.order = order
        self.quotient_basis = tuple(quotient_basis)
        self.q_mode = q_mode
        self.weighting = weighting
        self.nvars = weighting.nvars
        self._index = {m: i for i, m in enumerate(self.quotient_basis)}
        self._leads = [max(g.xsupport(), key=order.key) for g in self.reduced_basis]
        self._internal = [_to_internal(g) for g in self.reduced_basis]
        self._lcs = [
            _lead_const(d[lm], True) for d, lm in zip(self._internal, self._leads)
        ]
        self._nf_cache: dict = {}

    @property
    def dimension(self) -> int:
        return len(self.quotient_basis)

    @property
    def formal(self) -> bool:
        return self.q_mode == FORMAL

    def is_standard(self, xexp) -> bool:
        return xexp in self._index

    def basis_index(self, xexp) -> int:
        return self._index[tuple(xexp)]

    def weight(self, xexp) -> int:
        return self.order.weight(xexp)

    def top_weight(self) -> int:
        return max(self.weight(m) for m in self.quotient_basis)

    def top_monomials(self) -> list[tuple]:
        top = self.top_weight()
        return [m for m in self.quotient_basis if self.weight(m) == top]

    def _prepare(self, F: WPolynomial) -> WPolynomial:
        if F.nvars == 0:
            F = F.lift(self.nvars)
        if F.nvars != self.nvars:
            raise ValueError(f"polynomial in {F.nvars} variables, model has {self.nvars}")
        if not self.formal and not F.is_q_free():
            F = F.subs_q(self.q_mode)
        return F

    # direct division algorithm -------------------------------------------
    def reduce(self, F: WPolynomial) -> WPolynomial:
        """Remainder of F by the reduced basis (multivariate division)."""
        F = self._prepare(F)
        p = _to_internal(F)
        r: dict = {}
        key = self.order.key
        while p:
            m = max(p, key=key)
            i = next((j for j, lm in enumerate(self._leads) if _divides(lm, m)), None)
            if i is None:
                r[m] = p.pop(m)
                continue
            cq = {d: norm_coeff(Fraction(c) / self._lcs[i]) for d, c in p[m].items()}
            _submul(p, cq, _minus(m, self._leads[i]), self._internal[i])
            p.pop(m, None)
        return _from_internal(self.nvars, r)

    # table-driven normal form ---------------------------------------------
    def _nf_monomial(self, xexp) -> dict:
        hit = self._nf_cache.get(xexp)
        if hit is not None:
            return hit
        if xexp in self._index:
            res = {xexp + (0,): 1}
        else:
            preds = [i for i, e in enumerate(xexp) if e]
            border = any(_minus(xexp, tuple(int(j == i) for j in range(self.nvars))) in self._index for i in preds)
            if border:
                res = dict(self.reduce(WPolynomial.monomial(xexp)).items())
            else:
                i = preds[-1]
                unit = tuple(int(j == i) for j in range(self.nvars))
                prev = self._nf_monomial(_minus(xexp, unit))
                acc: dict = {}
                for e, c in prev.items():
                    sub = self._nf_monomial(tuple(a + b for a, b in zip(e[:-1], unit)))
                    qs = e[-1]
                    for e2, c2 in sub.items():
                        key = e2[:-1] + (e2[-1] + qs,)
                        acc[key] = acc.get(key, 0) + c * c2
                res = {e: norm_coeff(c) for e, c in acc.items() if c}
        self._nf_cache[xexp] = res
        return res

    def normal_form(self, F: WPolynomial) -> WPolynomial:
        """Unique representative of F modulo the ideal, on the quotient basis."""
        F = self._prepare(F)
        acc: dict = {}
        for e, c in F.items():
            qs = e[-1]
            for e2, c2 in self._nf_monomial(e[:-1]).items():
                key = e2[:-1] + (e2[-1] + qs,)
                acc[key] = acc.get(key, 0) + c * c2
        return WPolynomial(self.nvars, {e: c for e, c in acc.items() if c})

    def multiply(self, a: WPolynomial, b: WPolynomial) -> WPolynomial:
        return self.normal_form(self._prepare(a) * self._prepare(b))

    def coordinates(self, F: WPolynomial) -> list[WPolynomial]:
        """Coefficients (in Q[q]) of NF(F) along ``quotient_basis``."""
        v = self.normal_form(F)
        parts = v.by_xmonomial()
        zero = WPolynomial.zero(0)
        return [parts.get(m, zero) for m in self.quotient_basis]

    def mult_operator(self, F: WPolynomial) -> list[list[WPolynomial]]:
        """Matrix of multiplication by F; column j is NF(F * basis_j)."""
        F = self._prepare(F)
        dim = self.dimension
        mat = [[WPolynomial.zero(0) for _ in range(dim)] for _ in range(dim)]
        for j, b in enumerate(self.quotient_basis):
            col = self.coordinates(F.shift(b))
            for i in range(dim):
                mat[i][j] = col[i]
        return mat

    def __repr__(self):
        return f"GroebnerModel(dim={self.dimension}, q_mode={self.q_mode!r}, basis={len(self.reduced_basis)})"


def trace(mat) -> WPolynomial:
    total = WPolynomial.zero(0)
    for i in range(len(mat)):
        total = total + mat[i][i]
    return total


def standard_monomials(leads: Sequence[tuple], nvars: int, order: MonomialOrder) -> list[tuple]:
    for i in range(nvars):
        if not any(lm[i] > 0 and all(lm[j] == 0 for j in range(nvars) if j != i) for lm in leads):
            raise InfiniteQuotientError(f"infinite quotient: no pure power of X{i + 1} among leading terms")
    seen = {(0,) * nvars}
    frontier = [(0,) * nvars]
    if any(_divides(lm, frontier[0]) for lm in leads):
        return []
    while frontier:
        nxt = []
        for m in frontier:
            for i in range(nvars):
                c = tuple(e + (j == i) for j, e in enumerate(m))
                if c in seen or any(_divides(lm, c) for lm in leads):
                    continue
                seen.add(c)
                nxt.append(c)
        frontier = nxt
    # ascending weight, descending monomial order within a weight
    return sorted(seen, key=lambda m: (order.weight(m), tuple(-x for x in order.key(m)[1])))


def groebner_basis(gens: Sequence[WPolynomial], weighting: Weighting, q_mode=FORMAL,
                   order: MonomialOrder | None = None) -> GroebnerModel:
    """Build the quotient model of the ideal generated by ``gens``.

    q_mode is ``"formal"`` (coefficients in Q[q]) or a rational value for q.
    """
    order = order or MonomialOrder(weighting.variable_weights)
    formal = q_mode == FORMAL
    if not formal:
        q_mode = norm_coeff(Fraction(q_mode))
        work = [g.subs_q(q_mode) for g in gens]
    else:
        work = list(gens)
    basis = buchberger(work, order, formal)
    nvars = weighting.nvars
    reduced = [_from_internal(nvars, d) for d in basis]
    leads = [max(d, key=order.key) for d in basis]
    if not reduced:
        raise InfiniteQuotientError("infinite quotient: zero ideal")
    qb = standard_monomials(leads, nvars, order)
    return GroebnerModel(gens, reduced, order, qb, q_mode, weighting)

"""Sparse exact polynomials in X_1..X_k and a formal parameter q.

A term is keyed by the exponent tuple ``(e_1, ..., e_k, e_q)``; coefficients
are Python ints or ``fractions.Fraction`` (integral values are stored as
ints so that the common all-integer case stays on the fast path).  A
polynomial with ``nvars == 0`` is a polynomial in q alone; these serve as
the coefficient domain Q[q] throughout the package.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Number, Rational
from typing import Iterable, Mapping

from ..errors import SpecError


def norm_coeff(c):
    """Canonical exact coefficient: int when integral, Fraction otherwise."""
    if isinstance(c, int):
        return c
    if isinstance(c, Fraction):
        return c.numerator if c.denominator == 1 else c
    if isinstance(c, Rational):
        return norm_coeff(Fraction(c.numerator, c.denominator))
    raise TypeError(f"inexact coefficient {c!r}")


@dataclass(frozen=True)
class Weighting:
    """Weights for the two gradings carried by every polynomial.

    The cohomological grading gives q weight 0 (used for initial forms),
    the homogeneous grading gives q weight ``q_homogeneous_weight`` (n for
    G(k, n), used for selection rules).
    """

    variable_weights: tuple[int, ...]
    q_homogeneous_weight: int = 0

    def __post_init__(self):
        object.__setattr__(self, "variable_weights", tuple(self.variable_weights))
        if any(w <= 0 for w in self.variable_weights):
            raise SpecError("variable weights must be positive")

    @property
    def q_cohomological_weight(self) -> int:
        return 0

    @property
    def nvars(self) -> int:
        return len(self.variable_weights)

    def weight(self, xexp) -> int:
        return sum(w * e for w, e in zip(self.variable_weights, xexp))

    @classmethod
    def grassmannian(cls, k: int, n: int) -> "Weighting":
        return cls(tuple(range(1, k + 1)), n)


class WPolynomial:
    """Immutable sparse polynomial with exact rational coefficients."""

    __slots__ = ("nvars", "_terms", "_hash")

    def __init__(self, nvars: int, terms: Mapping[tuple, object] | None = None, *, _trusted=False):
        self.nvars = nvars
        if _trusted:
            self._terms = terms
        else:
            clean = {}
            for exp, c in (terms or {}).items():
                exp = tuple(exp)
                if len(exp) != nvars + 1:
                    raise ValueError(f"exponent {exp} has wrong length for {nvars} variables")
                c = norm_coeff(c)
                if c:
                    clean[exp] = clean.get(exp, 0) + c
                    if not clean[exp]:
                        del clean[exp]
            self._terms = clean
        self._hash = None

    # construction -----------------------------------------------------
    @classmethod
    def zero(cls, nvars: int) -> "WPolynomial":
        return cls(nvars, {}, _trusted=True)

    @classmethod
    def constant(cls, nvars: int, c) -> "WPolynomial":
        c = norm_coeff(c)
        return cls(nvars, {(0,) * (nvars + 1): c} if c else {}, _trusted=True)

    @classmethod
    def var(cls, nvars: int, i: int) -> "WPolynomial":
        """The variable X_i, 1-based."""
        if not 1 <= i <= nvars:
            raise ValueError(f"no variable X{i} among {nvars}")
        e = [0] * (nvars + 1)
        e[i - 1] = 1
        return cls(nvars, {tuple(e): 1}, _trusted=True)

    @classmethod
    def q(cls, nvars: int) -> "WPolynomial":
        return cls(nvars, {(0,) * nvars + (1,): 1}, _trusted=True)

    @classmethod
    def monomial(cls, xexp, c=1, qexp: int = 0) -> "WPolynomial":
        c = norm_coeff(c)
        return cls(len(xexp), {tuple(xexp) + (qexp,): c} if c else {}, _trusted=True)

    @classmethod
    def from_xdict(cls, nvars: int, parts: Mapping[tuple, "WPolynomial"]) -> "WPolynomial":
        """Assemble from ``{x-exponent: q-polynomial}``."""
        terms = {}
        for xexp, qp in parts.items():
            for (eq,), c in qp._terms.items():
                terms[tuple(xexp) + (eq,)] = c
        return cls(nvars, terms, _trusted=True)

    @classmethod
    def qpoly(cls, coeffs: Mapping[int, object]) -> "WPolynomial":
        """Polynomial in q alone from ``{power: coefficient}``."""
        return cls(0, {(d,): c for d, c in coeffs.items()})

    # access -----------------------------------------------------------
    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self._terms)

    def constant_value(self):
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self._terms.get((0,) * (self.nvars + 1), 0)

    def is_q_free(self) -> bool:
        return all(e[-1] == 0 for e in self._terms)

    def q_degree(self) -> int:
        return max((e[-1] for e in self._terms), default=-1)

    def cohomological_degree(self, w: Weighting) -> int:
        if not self._terms:
            raise ValueError("degree of zero polynomial")
        return max(w.weight(e[:-1]) for e in self._terms)

    def homogeneous_degree(self, w: Weighting) -> int:
        if not self._terms:
            raise ValueError("degree of zero polynomial")
        return max(w.weight(e[:-1]) + w.q_homogeneous_weight * e[-1] for e in self._terms)

    def is_homogeneous(self, w: Weighting, *, with_q: bool = True) -> bool:
        qw = w.q_homogeneous_weight if with_q else 0
        return len({w.weight(e[:-1]) + qw * e[-1] for e in self._terms}) <= 1

    def by_xmonomial(self) -> dict[tuple, "WPolynomial"]:
        """Group terms as ``{x-exponent: q-polynomial}``."""
        groups: dict[tuple, dict] = {}
        for e, c in self._terms.items():
            groups.setdefault(e[:-1], {})[(e[-1],)] = c
        return {x: WPolynomial(0, d, _trusted=True) for x, d in groups.items()}

    def coefficient(self, xexp) -> "WPolynomial":
        """The q-polynomial multiplying the X-monomial ``xexp``."""
        xexp = tuple(xexp)
        d = {(e[-1],): c for e, c in self._terms.items() if e[:-1] == xexp}
        return WPolynomial(0, d, _trusted=True)

    def xsupport(self) -> set[tuple]:
        return {e[:-1] for e in self._terms}

    # arithmetic -------------------------------------------------------
    def _coerce(self, other) -> "WPolynomial":
        if isinstance(other, WPolynomial):
            if other.nvars == self.nvars:
                return other
            if other.nvars == 0:
                return other.lift(self.nvars)
            if self.nvars == 0:
                raise TypeError("cannot coerce an X-polynomial into Q[q]")
            raise TypeError(f"variable count mismatch: {self.nvars} vs {other.nvars}")
        if isinstance(other, (int, Fraction)) or isinstance(other, Rational):
            return WPolynomial.constant(self.nvars, other)
        return NotImplemented

    def lift(self, nvars: int) -> "WPolynomial":
        """Embed a q-polynomial into the ring with ``nvars`` X-variables."""
        if self.nvars != 0:
            raise TypeError("only q-polynomials can be lifted")
        pad = (0,) * nvars
        return WPolynomial(nvars, {pad + e: c for e, c in self._terms.items()}, _trusted=True)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.nvars != self.nvars:
            return other + self
        out = dict(self._terms)
        for e, c in other._terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return WPolynomial(self.nvars, out, _trusted=True)

    __radd__ = __add__

    def __neg__(self):
        return WPolynomial(self.nvars, {e: -c for e, c in self._terms.items()}, _trusted=True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "WPolynomial":
        c = norm_coeff(c)
        if not c:
            return WPolynomial.zero(self.nvars)
        return WPolynomial(self.nvars, {e: norm_coeff(v * c) for e, v in self._terms.items()}, _trusted=True)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) or (isinstance(other, Rational) and not isinstance(other, bool)):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.nvars != self.nvars:
            return other * self
        out: dict = {}
        get = out.get
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = get(e, 0) + c1 * c2
        return WPolynomial(self.nvars, {e: norm_coeff(c) for e, c in out.items() if c}, _trusted=True)

    __rmul__ = __mul__

    def __pow__(self, m: int):
        if m < 0:
            raise ValueError("negative power")
        result = WPolynomial.constant(self.nvars, 1)
        base = self
        while m:
            if m & 1:
                result = result * base
            m >>= 1
            if m:
                base = base * base
        return result

    def shift(self, xexp, qexp: int = 0) -> "WPolynomial":
        """Multiply by the monomial X^xexp q^qexp."""
        add = tuple(xexp) + (qexp,)
        return WPolynomial(
            self.nvars,
            {tuple(a + b for a, b in zip(e, add)): c for e, c in self._terms.items()},
            _trusted=True,
        )

    def __eq__(self, other):
        if isinstance(other, WPolynomial):
            if other.nvars != self.nvars:
                if 0 in (self.nvars, other.nvars) and self.is_constant() and other.is_constant():
                    return self.constant_value() == other.constant_value()
                return False
            return self._terms == other._terms
        if isinstance(other, Number):
            return self.is_constant() and self.constant_value() == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self._terms.items())))
        return self._hash

    # calculus / evaluation -------------------------------------------
    def derivative(self, i: int) -> "WPolynomial":
        """Partial derivative in X_i (1-based); q is a constant."""
        j = i - 1
        out = {}
        for e, c in self._terms.items():
            if e[j]:
                ne = list(e)
                ne[j] -= 1
                out[tuple(ne)] = c * e[j]
        return WPolynomial(self.nvars, out, _trusted=True)

    def subs_q(self, value) -> "WPolynomial":
        """Specialize q to an exact rational value."""
        value = norm_coeff(value)
        out: dict = {}
        for e, c in self._terms.items():
            key = e[:-1] + (0,)
            out[key] = out.get(key, 0) + c * value ** e[-1]
        return WPolynomial(self.nvars, out)

    def evaluate(self, xs, q=0, one=1):
        """Evaluate at numeric X-values and q (any ring supporting * and +)."""
        exact = isinstance(one, (int, Fraction))
        total = 0 * one
        pw: dict = {}
        for e, c in self._terms.items():
            if exact or isinstance(c, int):
                v = c * one
            else:
                v = one * c.numerator / c.denominator
            for i, ei in enumerate(e[:-1]):
                if ei:
                    key = (i, ei)
                    p = pw.get(key)
                    if p is None:
                        p = pw[key] = xs[i] ** ei
                    v = v * p
            if e[-1]:
                v = v * q ** e[-1]
            total = total + v
        return total

    # display ----------------------------------------------------------
    def sorted_items(self):
        """Terms in a deterministic order: descending total exponent, then tuple."""
        return sorted(self._terms.items(), key=lambda t: (-sum(t[0]), tuple(-x for x in t[0])))

    def __repr__(self):
        return f"WPolynomial({self})"

    def __str__(self):
        if not self._terms:
            return "0"
        names = [f"X{i + 1}" for i in range(self.nvars)] + ["q"]
        parts = []
        for e, c in self.sorted_items():
            mono = "*".join(
                name if p == 1 else f"{name}^{p}" for name, p in zip(names, e) if p
            )
            if not mono:
                s = str(c)
            elif c == 1:
                s = mono
            elif c == -1:
                s = "-" + mono
            else:
                s = f"{c}*{mono}"
            parts.append(s)
        out = " + ".join(parts)
        return out.replace("+ -", "- ")


def initial_form(p: WPolynomial, w: Weighting) -> WPolynomial:
    """Sum of the terms of maximal cohomological degree (q has weight 0)."""
    if p.is_zero():
        raise ValueError("no initial form of zero")
    top = p.cohomological_degree(w)
    return WPolynomial(p.nvars, {e: c for e, c in p.items() if w.weight(e[:-1]) == top}, _trusted=True)


def determinant(mat: list[list[WPolynomial]], nvars: int) -> WPolynomial:
    """Laplace expansion along rows, memoized on the used column set."""
    size = len(mat)
    memo: dict = {}

    def rec(row, used):
        if row == size:
            return WPolynomial.constant(nvars, 1)
        hit = memo.get(used)
        if hit is not None:
            return hit
        total = WPolynomial.zero(nvars)
        sign = 1
        for col in range(size):
            if used >> col & 1:
                continue
            entry = mat[row][col]
            if entry:
                minor = rec(row + 1, used | (1 << col))
                if minor:
                    total = total + (entry * minor).scale(sign)
            sign = -sign
        memo[used] = total
        return total

    return rec(0, 0)


def xvars(nvars: int) -> list[WPolynomial]:
    return [WPolynomial.var(nvars, i) for i in range(1, nvars + 1)]


def monomials_up_to(w: Weighting, max_weight: int) -> Iterable[tuple]:
    """All X-exponents of weight <= max_weight, ascending weight."""
    ws = w.variable_weights

    def rec(i, budget):
        if i == len(ws):
            yield ()
            return
        for e in range(budget // ws[i] + 1):
            for rest in rec(i + 1, budget - e * ws[i]):
                yield (e,) + rest

    return sorted(rec(0, max_weight), key=lambda e: (w.weight(e), tuple(-x for x in e)))

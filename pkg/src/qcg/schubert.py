"""Partitions in the k x (n-k) box, Schur/Segre/Chern classes, and a
classical Pieri-rule oracle.

Variables X_i stand for the Chern classes c_i(S) of the tautological
bundle; the Segre classes Y_j are the inverse series, and Schubert classes
are Jacobi-Trudi determinants in the Y_j.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import permutations
from typing import Iterable, Mapping
from weakref import WeakKeyDictionary

from .errors import InconsistencyError, SpecError
from .grass import GrassSpec
from .wpoly import GroebnerModel, WPolynomial
from .wpoly.poly import determinant
from .wpoly.poly import norm_coeff


@dataclass(frozen=True)
class BoxPartition:
    """Weakly decreasing parts n-k >= l_1 >= ... >= l_k >= 0."""

    parts: tuple[int, ...]
    spec: GrassSpec

    def __post_init__(self):
        parts = tuple(int(p) for p in self.parts)
        k, width = self.spec.box
        if len(parts) > k:
            if any(parts[k:]):
                raise SpecError(f"partition {parts} has more than k={k} nonzero parts")
            parts = parts[:k]
        parts = parts + (0,) * (k - len(parts))
        if any(a < b for a, b in zip(parts, parts[1:])):
            raise SpecError(f"partition {parts} is not weakly decreasing")
        if parts and (parts[0] > width or parts[-1] < 0):
            raise SpecError(f"partition {parts} does not fit in the {k}x{width} box")
        object.__setattr__(self, "parts", parts)

    @property
    def size(self) -> int:
        return sum(self.parts)

    def dual(self) -> "BoxPartition":
        return dual_partition(self)

    def stripped(self) -> tuple[int, ...]:
        """Parts without trailing zeros."""
        p = list(self.parts)
        while p and p[-1] == 0:
            p.pop()
        return tuple(p)

    def sort_key(self):
        return (self.size, tuple(-p for p in self.parts))

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def __str__(self):
        s = self.stripped()
        return "∅" if not s else ",".join(map(str, s))


def parse_partition(text: str, spec: GrassSpec) -> BoxPartition:
    """Parse ``"a,b,c"`` (trailing zeros optional; empty string or "0" is the empty partition)."""
    text = text.strip().strip("[]()")
    if text in ("", "0", "∅", "empty"):
        return BoxPartition((), spec)
    try:
        parts = tuple(int(t) for t in text.split(","))
    except ValueError:
        raise SpecError(f"bad partition syntax {text!r}") from None
    return BoxPartition(parts, spec)


def box_partitions(spec: GrassSpec) -> list[BoxPartition]:
    """All partitions in the box, by size and then lexicographically descending."""
    k, width = spec.box

    def rec(i, cap):
        if i == k:
            yield ()
            return
        for p in range(cap, -1, -1):
            for rest in rec(i + 1, p):
                yield (p,) + rest

    return sorted((BoxPartition(p, spec) for p in rec(0, width)), key=BoxPartition.sort_key)


def dual_partition(lam: BoxPartition) -> BoxPartition:
    width = lam.spec.n - lam.spec.k
    return BoxPartition(tuple(width - p for p in reversed(lam.parts)), lam.spec)


def full_box(spec: GrassSpec) -> BoxPartition:
    k, width = spec.box
    return BoxPartition((width,) * k, spec)


# Chern / Segre ------------------------------------------------------------

@lru_cache(maxsize=None)
def _segre(k: int, upto: int) -> tuple[WPolynomial, ...]:
    xs = [WPolynomial.var(k, i) for i in range(1, k + 1)]
    ys = [WPolynomial.constant(k, 1)]
    for j in range(1, upto + 1):
        y = WPolynomial.zero(k)
        for i in range(1, min(j, k) + 1):
            y = y - ys[j - i] * xs[i - 1]
        ys.append(y)
    return tuple(ys)


def segre_classes(k: int, upto: int) -> list[WPolynomial]:
    """[Y_0 = 1, Y_1, ..., Y_upto] from Y_j = -Y_{j-1}X_1 - ... - X_j (X_i = 0 for i > k)."""
    return list(_segre(k, upto))


def segre_from_chern(spec: GrassSpec) -> list[WPolynomial]:
    """Y_1..Y_n for G(k, n)."""
    return segre_classes(spec.k, spec.n)[1:]


def chern_from_segre(ys: Iterable[WPolynomial], k: int) -> list[WPolynomial]:
    """Invert the recursion: recover c_1..c_k from Y_1..Y_k."""
    ys = [WPolynomial.constant(k, 1)] + list(ys)
    cs = [WPolynomial.constant(k, 1)]
    for j in range(1, k + 1):
        c = -ys[j]
        for i in range(1, j):
            c = c - ys[j - i] * cs[i]
        cs.append(c)
    return cs[1:]


def jacobi_trudi(parts: tuple[int, ...], k: int) -> WPolynomial:
    top = max((p + k for p in parts), default=0)
    ys = segre_classes(k, top)
    zero = WPolynomial.zero(k)

    def s(j):
        return ys[j] if j >= 0 else zero

    mat = [[s(parts[i] + j - i) for j in range(k)] for i in range(k)]
    return determinant(mat, k)


def schur_polynomial(lam: BoxPartition) -> WPolynomial:
    """The Schubert class {lambda} = det(Y_{l_i + j - i}) as a polynomial in X."""
    return jacobi_trudi(lam.parts, lam.spec.k)


# Schubert vectors ---------------------------------------------------------

def _qp(c) -> WPolynomial:
    if isinstance(c, WPolynomial):
        if c.nvars != 0:
            raise TypeError("Schubert coefficients must be polynomials in q only")
        return c
    return WPolynomial.constant(0, c)


class SchubertVector:
    """Finite combination of Schubert classes with coefficients in Q[q]."""

    __slots__ = ("spec", "_entries")

    def __init__(self, spec: GrassSpec, entries: Mapping[BoxPartition, object] | None = None):
        self.spec = spec
        clean = {}
        for lam, c in (entries or {}).items():
            if lam.spec != spec:
                raise SpecError(f"partition {lam} belongs to {lam.spec}, not {spec}")
            c = _qp(c)
            if c:
                clean[lam] = clean[lam] + c if lam in clean else c
                if not clean[lam]:
                    del clean[lam]
        self._entries = clean

    @classmethod
    def unit(cls, lam: BoxPartition) -> "SchubertVector":
        return cls(lam.spec, {lam: 1})

    def items(self):
        """Entries in serialization order (size, then descending lexicographic)."""
        return sorted(self._entries.items(), key=lambda t: t[0].sort_key())

    def coefficient(self, lam: BoxPartition) -> WPolynomial:
        return self._entries.get(lam, WPolynomial.zero(0))

    def __bool__(self):
        return bool(self._entries)

    def __len__(self):
        return len(self._entries)

    def _check(self, other):
        if not isinstance(other, SchubertVector):
            return NotImplemented
        if other.spec != self.spec:
            raise SpecError(f"spec mismatch: {self.spec} vs {other.spec}")
        return other

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        out = dict(self._entries)
        for lam, c in other._entries.items():
            out[lam] = out[lam] + c if lam in out else c
        return SchubertVector(self.spec, out)

    def __neg__(self):
        return SchubertVector(self.spec, {lam: -c for lam, c in self._entries.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "SchubertVector":
        c = _qp(c)
        return SchubertVector(self.spec, {lam: v * c for lam, v in self._entries.items()})

    __mul__ = scale
    __rmul__ = scale

    def __eq__(self, other):
        if not isinstance(other, SchubertVector):
            return NotImplemented
        return self.spec == other.spec and self._entries == other._entries

    def __hash__(self):
        return hash((self.spec, frozenset(self._entries.items())))

    def q_part(self, d: int) -> "SchubertVector":
        """Classes multiplying q^d, as a q-free vector."""
        out = {}
        for lam, c in self._entries.items():
            v = c.terms.get((d,), 0)
            if v:
                out[lam] = v
        return SchubertVector(self.spec, out)

    def is_homogeneous(self) -> bool:
        n = self.spec.n
        degs = {lam.size + n * e[0] for lam, c in self._entries.items() for e in c.terms}
        return len(degs) <= 1

    def to_polynomial(self) -> WPolynomial:
        k = self.spec.k
        total = WPolynomial.zero(k)
        for lam, c in self._entries.items():
            total = total + schur_polynomial(lam) * c.lift(k)
        return total

    def __repr__(self):
        return f"SchubertVector({self})"

    def __str__(self):
        if not self._entries:
            return "0"
        out = []
        for lam, c in self.items():
            sig = f"σ_{{{lam}}}" if lam.size else "σ_∅"
            out.append(sig if c == 1 else f"({c})·{sig}")
        return " + ".join(out)


# classical oracle ---------------------------------------------------------

def pieri_product(lam: BoxPartition, r: int) -> SchubertVector:
    """sigma_lambda times the row class sigma_(r): add horizontal r-strips inside the box."""
    spec = lam.spec
    k, width = spec.box
    if r < 0 or r > width:
        if r < 0:
            raise SpecError(f"row length {r} must be non-negative")
        return SchubertVector(spec)
    if r == 0:
        return SchubertVector.unit(lam)
    lp = lam.parts
    out = {}

    def rec(i, remaining, acc):
        if i == k:
            if remaining == 0:
                mu = BoxPartition(tuple(acc), spec)
                out[mu] = out.get(mu, 0) + 1
            return
        hi = width if i == 0 else lp[i - 1]
        for m in range(lp[i], min(hi, lp[i] + remaining) + 1):
            rec(i + 1, remaining - (m - lp[i]), acc + [m])

    rec(0, r, [])
    return SchubertVector(spec, out)


def _perm_sign(p) -> int:
    sign = 1
    p = list(p)
    for i in range(len(p)):
        while p[i] != i:
            j = p[i]
            p[i], p[j] = p[j], p[i]
            sign = -sign
    return sign


def classical_product(lam: BoxPartition, mu: BoxPartition) -> SchubertVector:
    """Cup product by expanding sigma_mu = det(h_{mu_i + j - i}) into Pieri operators."""
    spec = lam.spec
    k = spec.k
    total: dict = {}
    for perm in permutations(range(k)):
        rows = [mu.parts[i] + perm[i] - i for i in range(k)]
        if any(r < 0 for r in rows):
            continue
        vec = {lam: 1}
        for r in rows:
            nxt: dict = {}
            for nu, c in vec.items():
                for rho, d in pieri_product(nu, r).items():
                    nxt[rho] = nxt.get(rho, 0) + c * d.constant_value()
            vec = {a: b for a, b in nxt.items() if b}
            if not vec:
                break
        s = _perm_sign(perm)
        for nu, c in vec.items():
            total[nu] = total.get(nu, 0) + s * c
    return SchubertVector(spec, total)


# change of basis ----------------------------------------------------------

def _invert(mat: list[list]) -> list[list]:
    """Exact Gauss-Jordan inverse over Q."""
    size = len(mat)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(size)] for i, row in enumerate(mat)]
    for col in range(size):
        piv = next((r for r in range(col, size) if a[r][col] != 0), None)
        if piv is None:
            raise InconsistencyError("singular Schubert change-of-basis block")
        a[col], a[piv] = a[piv], a[col]
        inv = 1 / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for r in range(size):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [[norm_coeff(x) for x in row[size:]] for row in a]


class SchubertBasis:
    """Normal forms of all Schubert classes in a quotient model, with the
    weight-graded inverse used to read off Schubert coordinates."""

    def __init__(self, spec: GrassSpec, model: GroebnerModel):
        self.spec = spec
        self.model = model
        self.partitions = box_partitions(spec)
        self.images = {lam: model.normal_form(schur_polynomial(lam)) for lam in self.partitions}
        self.blocks: dict[int, tuple[list, list, list]] = {}
        by_size: dict[int, list] = {}
        for lam in self.partitions:
            by_size.setdefault(lam.size, []).append(lam)
        mons_by_w: dict[int, list] = {}
        for m in model.quotient_basis:
            mons_by_w.setdefault(model.weight(m), []).append(m)
        if sorted(by_size) != sorted(mons_by_w) or any(len(by_size[w]) != len(mons_by_w[w]) for w in by_size):
            raise InconsistencyError("quotient-basis weight census differs from the partition census")
        for w, lams in by_size.items():
            mons = mons_by_w[w]
            mat = []
            for m in mons:
                row = []
                for lam in lams:
                    c = self.images[lam].coefficient(m)
                    if not c.is_constant():
                        raise InconsistencyError(f"top component of {{{lam}}} is not q-free")
                    row.append(c.constant_value())
                mat.append(row)
            self.blocks[w] = (lams, mons, _invert(mat))

    def to_vector(self, F: WPolynomial) -> SchubertVector:
        model = self.model
        v = model.normal_form(F)
        coeffs: dict = {}
        for w in sorted(self.blocks, reverse=True):
            lams, mons, inv = self.blocks[w]
            comp = [v.coefficient(m) for m in mons]
            if not any(comp):
                continue
            k = model.nvars
            for i, lam in enumerate(lams):
                a = WPolynomial.zero(0)
                for j, cj in enumerate(comp):
                    if inv[i][j] and cj:
                        a = a + cj.scale(inv[i][j])
                if a:
                    coeffs[lam] = a
                    v = v - self.images[lam] * a.lift(k)
            if any(v.coefficient(m) for m in mons):
                raise InconsistencyError(f"weight-{w} component did not clear")
        if v:
            raise InconsistencyError(f"residual {v} after Schubert expansion")
        return SchubertVector(self.spec, coeffs)

    def to_polynomial(self, vec: SchubertVector) -> WPolynomial:
        """Quotient-basis representative of a Schubert vector."""
        k = self.model.nvars
        total = WPolynomial.zero(k)
        for lam, c in vec.items():
            total = total + self.images[lam] * c.lift(k)
        return total


_BASES: "WeakKeyDictionary[GroebnerModel, SchubertBasis]" = WeakKeyDictionary()


def schubert_basis(spec: GrassSpec, model: GroebnerModel) -> SchubertBasis:
    sb = _BASES.get(model)
    if sb is None or sb.spec != spec:
        sb = _BASES[model] = SchubertBasis(spec, model)
    return sb


def to_schubert_vector(F: WPolynomial, model: GroebnerModel, spec: GrassSpec | None = None) -> SchubertVector:
    """Express NF(F) in the Schubert basis of the quotient model."""
    if spec is None:
        k = model.nvars
        n = model.weighting.q_homogeneous_weight
        spec = GrassSpec(k, n)
    return schubert_basis(spec, model).to_vector(F)

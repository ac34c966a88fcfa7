"""Exact JSON encodings of engine results.

Coefficients are rational strings keyed by q-power, partitions are integer
arrays without trailing zeros: {"[2,2]": {"0": "1"}, "[]": {"1": "1"}}.
"""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from fractions import Fraction

from .errors import SpecError
from .grass import GrassSpec
from .schubert import BoxPartition, SchubertVector
from .wpoly import WPolynomial

SCHEMA = "qcg-result/1"


def rational_str(c) -> str:
    return str(Fraction(c))


def qpoly_to_json(p: WPolynomial) -> dict[str, str]:
    if p.nvars != 0:
        raise TypeError("expected a polynomial in q only")
    return {str(e[0]): rational_str(c) for e, c in sorted(p.items())}


def qpoly_from_json(d: dict[str, str]) -> WPolynomial:
    return WPolynomial.qpoly({int(e): Fraction(c) for e, c in d.items()})


def partition_key(lam: BoxPartition) -> str:
    return json.dumps(list(lam.stripped()), separators=(",", ":"))


def vector_to_json(v: SchubertVector) -> dict[str, dict[str, str]]:
    return {partition_key(lam): qpoly_to_json(c) for lam, c in v.items()}


def vector_from_json(d: dict, spec: GrassSpec) -> SchubertVector:
    entries = {}
    for key, coeffs in d.items():
        try:
            parts = tuple(json.loads(key))
        except (ValueError, TypeError):
            raise SpecError(f"bad partition key {key!r}") from None
        entries[BoxPartition(parts, spec)] = qpoly_from_json(coeffs)
    return SchubertVector(spec, entries)


def dumps(obj) -> str:
    """Canonical JSON text: fixed key order as built, two-space indent, trailing newline."""
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


@dataclass
class QueryResult:
    command: str
    spec: dict
    inputs: dict
    q_mode: str
    precision: int | None
    provenance: str
    result: dict
    agreement: bool | None = None
    diagnostics: dict = field(default_factory=dict)
    timing: float | None = None

    def to_dict(self) -> dict:
        d = {"schema": SCHEMA}
        d.update(asdict(self))
        return d

    def serialize(self) -> str:
        return dumps(self.to_dict())

    @classmethod
    def parse(cls, text: str) -> "QueryResult":
        d = json.loads(text)
        if d.pop("schema", None) != SCHEMA:
            raise SpecError("not a qcg query result")
        return cls(**d)

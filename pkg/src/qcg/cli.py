"""The ``qcg`` command line.

Exit codes: 0 success, 1 usage error, 2 failed cross-check, 3 precision failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import random
import sys
import time
from fractions import Fraction

import mpmath

from . import lgmodel
from .errors import InconsistencyError, PrecisionError, QCGError, SpecError
from .grass import GrassSpec, spec_range
from .polyparse import parse_polynomial, parse_rational
from .qring import genus_invariant_exact, gw3, quantum_model, quantum_product, ring_selfcheck
from .residues import (
    genus_invariant_residue,
    grassmannian_context,
    reconciliation,
    sign_report,
    total_residue,
    trace_residue_check,
)
from .schubert import SchubertVector, box_partitions, parse_partition
from .serialize import QueryResult, dumps, partition_key, qpoly_to_json, vector_to_json
from .wpoly import FORMAL, Weighting, WPolynomial, monomials_up_to

EXIT_OK, EXIT_USAGE, EXIT_INCONSISTENT, EXIT_PRECISION = 0, 1, 2, 3
REPORT_SCHEMA = "qcg-report/1"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}")


def _q_arg(text: str):
    if text.strip().lower() == "formal":
        return FORMAL
    return parse_rational(text)


def _common(p, *, spec=True):
    if spec:
        p.add_argument("--k", type=int, required=True)
        p.add_argument("--n", type=int, required=True)
    p.add_argument("--q", type=_q_arg, default=FORMAL, help='rational value or "formal" (default)')
    p.add_argument("--precision", type=int, default=None, help="decimal digits for numeric pipelines")
    p.add_argument("--out", default=None, help="write output here instead of stdout")
    p.add_argument("--timing", action="store_true", help="record wall time in the output")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qcg", description="Quantum cohomology of Grassmannians.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("product", help="quantum product of two Schubert classes")
    _common(p)
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)

    p = sub.add_parser("gw3", help="genus-0 three-point invariant")
    _common(p)
    for name in ("--a", "--b", "--c"):
        p.add_argument(name, required=True)
    p.add_argument("--d", type=int, required=True)

    p = sub.add_parser("invariant", help="genus-g invariant <F>_g")
    _common(p)
    p.add_argument("--genus", type=int, default=0)
    p.add_argument("--poly", required=True, help="polynomial in X1..Xk and q")
    p.add_argument("--method", choices=("exact", "residue", "vi", "all"), default="exact")

    p = sub.add_parser("residue", help="total residue of a polynomial")
    _common(p)
    p.add_argument("--poly", required=True)

    p = sub.add_parser("critical", help="critical points of the potential")
    _common(p)

    p = sub.add_parser("export", help="multiplication and gw3 tables")
    _common(p)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--max-weight", type=int, default=None,
                   help="largest |a|+|b|+|c| among exported gw3 constants (default: all)")

    for name, helptext in (("selftest", "run every invariant suite"), ("report", "sign-reconciliation report")):
        p = sub.add_parser(name, help=helptext)
        _common(p, spec=False)
        p.add_argument("--kmax", type=int, default=3)
        p.add_argument("--nmax", type=int, default=7)
        if name == "selftest":
            p.add_argument("--seed", type=int, default=0)
            p.add_argument("--samples", type=int, default=100)
            p.add_argument("--corrupt", action="store_true", help="negative control: perturb one relation")
    return parser


# helpers ------------------------------------------------------------------

def _spec(args) -> GrassSpec:
    return GrassSpec(args.k, args.n)


def _q_label(q) -> str:
    return FORMAL if q == FORMAL else str(Fraction(q))


def _specialize(p: WPolynomial, q) -> WPolynomial:
    return p if q == FORMAL else WPolynomial.constant(0, p.subs_q(q).evaluate((), 0) if p else 0)


def _precision(args) -> int:
    return args.precision or lgmodel.default_precision()


def _result(args, spec, inputs, provenance, result, **extra) -> QueryResult:
    return QueryResult(
        command=args.command,
        spec={"k": spec.k, "n": spec.n},
        inputs=inputs,
        q_mode=_q_label(args.q),
        precision=extra.pop("precision", None),
        provenance=provenance,
        result=result,
        **extra,
    )


# commands -----------------------------------------------------------------

def cmd_product(args):
    spec = _spec(args)
    a, b = parse_partition(args.a, spec), parse_partition(args.b, spec)
    m = quantum_model(spec, args.q)
    v = quantum_product(SchubertVector.unit(a), SchubertVector.unit(b), m)
    res = _result(args, spec, {"a": list(a.stripped()), "b": list(b.stripped())}, "exact",
                  {"kind": "vector", "value": vector_to_json(v)})
    return res, EXIT_OK


def cmd_gw3(args):
    spec = _spec(args)
    parts = [parse_partition(t, spec) for t in (args.a, args.b, args.c)]
    m = quantum_model(spec, args.q if args.q == FORMAL or args.q != 0 else FORMAL)
    value = gw3(*parts, args.d, m)
    inputs = {"a": list(parts[0].stripped()), "b": list(parts[1].stripped()),
              "c": list(parts[2].stripped()), "d": args.d}
    return _result(args, spec, inputs, "exact", {"kind": "integer", "value": str(value)}), EXIT_OK


def _vi_invariant(F, g, spec, prec):
    rec = lgmodel.reconstruct_q_polynomial(F, g, spec, precision=prec)
    return rec.poly, {"precision": rec.precision, "snap_residual": mpmath.nstr(rec.residual, 5),
                      "samples": rec.samples}


def cmd_invariant(args):
    spec = _spec(args)
    if args.genus < 0:
        raise SpecError("genus must be non-negative")
    F = parse_polynomial(args.poly, spec.k)
    m = quantum_model(spec)
    methods = ("exact", "residue", "vi") if args.method == "all" else (args.method,)
    values, diagnostics = {}, {}
    prec = None
    for method in methods:
        if method == "exact":
            values[method] = genus_invariant_exact(F, args.genus, m)
        elif method == "residue":
            inv = genus_invariant_residue(F, args.genus, grassmannian_context(m))
            values[method] = inv.reconciled
            diagnostics["residue"] = {"raw": qpoly_to_json(inv.raw), "reconciliation_exponent": inv.exponent}
        else:
            prec = _precision(args)
            values[method], diagnostics["vi"] = _vi_invariant(F, args.genus, spec, prec)
    values = {k: _specialize(v, args.q) for k, v in values.items()}
    inputs = {"genus": args.genus, "poly": str(F)}
    if args.method == "all":
        agree = len({str(v) for v in values.values()}) == 1
        payload = {"kind": "pipelines", "value": {k: qpoly_to_json(v) for k, v in values.items()}}
        res = _result(args, spec, inputs, "all", payload, agreement=agree, diagnostics=diagnostics, precision=prec)
        return res, EXIT_OK if agree else EXIT_INCONSISTENT
    (method, v), = values.items()
    res = _result(args, spec, inputs, method, {"kind": "qpoly", "value": qpoly_to_json(v)},
                  diagnostics=diagnostics, precision=prec)
    return res, EXIT_OK


def cmd_residue(args):
    spec = _spec(args)
    F = parse_polynomial(args.poly, spec.k)
    ctx = grassmannian_context(quantum_model(spec))
    r = _specialize(total_residue(F, ctx), args.q)
    return _result(args, spec, {"poly": str(F)}, "residue", {"kind": "qpoly", "value": qpoly_to_json(r)}), EXIT_OK


def cmd_critical(args):
    spec = _spec(args)
    q = 1 if args.q == FORMAL else args.q
    prec = _precision(args)
    pts = lgmodel.critical_points(spec, q, prec)
    digits = 20

    def z(v):
        return [mpmath.nstr(mpmath.re(v), digits), mpmath.nstr(mpmath.im(v), digits)]

    rows = [{"x": [z(v) for v in p.x], "jacobian": z(p.jac_value), "hessian": z(p.hess_value),
             "residual": mpmath.nstr(p.residual, 5)} for p in pts]
    res = _result(args, spec, {"q": str(Fraction(q))}, "vi", {"kind": "critical_points", "value": rows},
                  precision=pts[0].precision, diagnostics={"count": len(pts), "digits_shown": digits})
    return res, EXIT_OK


def export_tables(spec: GrassSpec, max_weight=None, fmt="json") -> str:
    """Full multiplication table and all nonzero gw3 constants, deterministic text."""
    m = quantum_model(spec)
    parts = box_partitions(spec)
    top = 3 * spec.dimension if max_weight is None else max_weight
    products = [(a, b, m.basis_product(a, b)) for a in parts for b in parts]
    constants = []
    for i, a in enumerate(parts):
        for j in range(i, len(parts)):
            for l in range(j, len(parts)):
                b, c = parts[j], parts[l]
                total = a.size + b.size + c.size
                if total > top:
                    continue
                extra = total - spec.dimension
                if extra < 0 or extra % spec.n:
                    continue
                d = extra // spec.n
                v = gw3(a, b, c, d, m)
                if v:
                    constants.append((a, b, c, d, v))
    if fmt == "json":
        doc = {
            "schema": "qcg-table/1",
            "spec": {"k": spec.k, "n": spec.n},
            "partitions": [list(p.stripped()) for p in parts],
            "products": [{"a": list(a.stripped()), "b": list(b.stripped()), "result": vector_to_json(v)}
                         for a, b, v in products],
            "gw3": [{"a": list(a.stripped()), "b": list(b.stripped()), "c": list(c.stripped()), "d": d,
                     "value": str(v)} for a, b, c, d, v in constants],
        }
        return dumps(doc)
    if fmt != "csv":
        raise SpecError(f"unknown format {fmt!r}")
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["table", "a", "b", "c", "d", "value"])
    for a, b, v in products:
        for lam, coef in v.items():
            for e, cf in sorted(coef.items()):
                w.writerow(["product", partition_key(a), partition_key(b), partition_key(lam), e[0], str(Fraction(cf))])
    for a, b, c, d, v in constants:
        w.writerow(["gw3", partition_key(a), partition_key(b), partition_key(c), d, v])
    return buf.getvalue()


def cmd_export(args):
    return export_tables(_spec(args), args.max_weight, args.format), EXIT_OK


def selftest_spec(spec: GrassSpec, rng: random.Random, *, samples=100, corrupt=False, precision=None) -> dict:
    """All invariant suites for one model; failures are recorded, not raised."""
    checks: dict[str, bool] = {}
    details: dict[str, str] = {}

    def run(name, fn):
        try:
            ok, why = fn()
        except QCGError as exc:
            ok, why = False, f"{type(exc).__name__}: {exc}"
        checks[name] = bool(ok)
        if not ok and why:
            details[name] = why

    state = {}

    def ring():
        state["m"] = m = quantum_model(spec, corrupt=corrupt)
        rep = ring_selfcheck(m, samples=samples, seed=rng.randrange(2 ** 31), raise_on_failure=False)
        bad = [k for k, v in rep.checks.items() if not v]
        return not bad, "; ".join(f"{k}: {rep.details.get(k, '')}" for k in bad)

    run("ring", ring)
    if "m" not in state:
        return {"spec": str(spec), "checks": checks, "details": details}
    m = state["m"]
    w = Weighting.grassmannian(spec.k, spec.n)
    monos = list(monomials_up_to(w, 3 * spec.dimension))

    def residues():
        state["ctx"] = ctx = grassmannian_context(m)
        for b in m.groebner.quotient_basis:
            if m.groebner.weight(b) < ctx.N and total_residue(WPolynomial.monomial(b), ctx):
                return False, f"residue of basis monomial {b} is nonzero"
        if total_residue(ctx.jacobian, ctx) != m.dimension:
            return False, "Res(J) differs from the dimension"
        return True, ""

    def traces():
        ctx = state["ctx"]
        for _ in range(5):
            F = sum((WPolynomial.monomial(rng.choice(monos), rng.randint(-3, 3)) for _ in range(3)),
                    WPolynomial.zero(spec.k))
            ok, tr, res = trace_residue_check(F, ctx)
            if not ok:
                return False, f"tr(mu_F) = {tr}, Res(F*J) = {res} for F = {F}"
        return True, ""

    def lg():
        r = lgmodel.lg_consistency(spec, seed=rng.randrange(2 ** 31))
        return r.ok, "" if r.ok else str(r)

    def cross():
        ctx = state["ctx"]
        for _ in range(4):
            F = WPolynomial.monomial(rng.choice(monos))
            g = rng.randint(0, 3)
            exact = genus_invariant_exact(F, g, m)
            res = genus_invariant_residue(F, g, ctx).reconciled
            vi = lgmodel.reconstruct_q_polynomial(F, g, spec, precision=precision).poly
            if not exact == res == vi:
                return False, f"<{F}>_{g}: exact {exact}, residue {res}, vi {vi}"
        return True, ""

    def signs():
        rec = reconciliation(state["ctx"])
        return True, f"epsilon {rec.epsilon}"

    run("residues", residues)
    if "ctx" in state:
        run("trace_identity", traces)
        run("lg_consistency", lg)
        run("cross_pipeline", cross)
        run("sign_reconciliation", signs)
    return {"spec": str(spec), "checks": checks, "details": details}


def cmd_selftest(args):
    rng = random.Random(args.seed)
    rows = [selftest_spec(s, rng, samples=args.samples, corrupt=args.corrupt, precision=args.precision)
            for s in spec_range(args.kmax, args.nmax)]
    passed = sum(all(r["checks"].values()) for r in rows)
    doc = {
        "schema": REPORT_SCHEMA,
        "kind": "selftest",
        "seed": args.seed,
        "corrupt": args.corrupt,
        "summary": {"models": len(rows), "passed": passed, "failed": len(rows) - passed},
        "models": rows,
    }
    return dumps(doc), EXIT_OK if passed == len(rows) else EXIT_INCONSISTENT


def cmd_report(args):
    return dumps(sign_report(spec_range(args.kmax, args.nmax))), EXIT_OK


COMMANDS = {
    "product": cmd_product,
    "gw3": cmd_gw3,
    "invariant": cmd_invariant,
    "residue": cmd_residue,
    "critical": cmd_critical,
    "export": cmd_export,
    "selftest": cmd_selftest,
    "report": cmd_report,
}


def run_command(argv, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(exc, file=stderr)
        return EXIT_USAGE
    start = time.perf_counter()
    try:
        out, code = COMMANDS[args.command](args)
    except SpecError as exc:
        print(f"qcg: {exc}", file=stderr)
        return EXIT_USAGE
    except InconsistencyError as exc:
        print(f"qcg: inconsistency: {exc}", file=stderr)
        return EXIT_INCONSISTENT
    except PrecisionError as exc:
        print(f"qcg: precision failure: {exc}", file=stderr)
        return EXIT_PRECISION
    except QCGError as exc:
        print(f"qcg: {exc}", file=stderr)
        return EXIT_INCONSISTENT
    if isinstance(out, QueryResult):
        if args.timing:
            out.timing = round(time.perf_counter() - start, 6)
        text = out.serialize()
    else:
        text = out
        if args.timing and args.command in ("selftest", "report"):
            doc = json.loads(text)
            doc["timing"] = round(time.perf_counter() - start, 6)
            text = dumps(doc)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    return code


def main(argv=None) -> int:
    return run_command(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())

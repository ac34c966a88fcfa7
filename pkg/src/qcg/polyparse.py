"""Safe parsing of user polynomials in X1..Xk and q (no eval)."""
from __future__ import annotations

import ast
import re
from fractions import Fraction

from .errors import SpecError
from .wpoly import WPolynomial

_VAR = re.compile(r"^X([1-9][0-9]*)$")


def parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise SpecError(f"not a rational number: {text!r}") from None


def parse_polynomial(text: str, k: int) -> WPolynomial:
    """Parse e.g. ``"X1^2*X2 - 3/2*q + 1"``; ``^`` and ``**`` both mean power."""
    src = text.strip().replace("^", "**")
    if not src:
        raise SpecError("empty polynomial")
    try:
        tree = ast.parse(src, mode="eval")
    except SyntaxError as exc:
        raise SpecError(f"cannot parse polynomial {text!r}: {exc.msg}") from None
    return _eval(tree.body, k, text)


def _eval(node, k, text) -> WPolynomial:
    if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
        return WPolynomial.constant(k, node.value)
    if isinstance(node, ast.Name):
        if node.id == "q":
            return WPolynomial.q(k)
        m = _VAR.match(node.id)
        if m and int(m.group(1)) <= k:
            return WPolynomial.var(k, int(m.group(1)))
        raise SpecError(f"unknown variable {node.id!r} in {text!r} (expected X1..X{k} or q)")
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.UAdd, ast.USub)):
        v = _eval(node.operand, k, text)
        return -v if isinstance(node.op, ast.USub) else v
    if isinstance(node, ast.BinOp):
        left = _eval(node.left, k, text)
        if isinstance(node.op, ast.Pow):
            right = _eval(node.right, k, text)
            if not right.is_constant() or not isinstance(right.constant_value(), int) or right.constant_value() < 0:
                raise SpecError(f"exponents must be non-negative integers in {text!r}")
            return left ** right.constant_value()
        right = _eval(node.right, k, text)
        if isinstance(node.op, ast.Add):
            return left + right
        if isinstance(node.op, ast.Sub):
            return left - right
        if isinstance(node.op, ast.Mult):
            return left * right
        if isinstance(node.op, ast.Div):
            if not right.is_constant() or not right:
                raise SpecError(f"division only by nonzero constants in {text!r}")
            return left.scale(1 / Fraction(right.constant_value()))
    raise SpecError(f"unsupported syntax in polynomial {text!r}")

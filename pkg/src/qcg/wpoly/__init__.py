"""Exact weighted polynomials and Gröbner quotient models."""
from .groebner import FORMAL, GroebnerModel, MonomialOrder, groebner_basis, trace
from .poly import Weighting, WPolynomial, initial_form, monomials_up_to, xvars

__all__ = [
    "FORMAL",
    "GroebnerModel",
    "MonomialOrder",
    "Weighting",
    "WPolynomial",
    "groebner_basis",
    "initial_form",
    "monomials_up_to",
    "trace",
    "xvars",
]

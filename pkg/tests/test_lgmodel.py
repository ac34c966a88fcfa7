from itertools import permutations
from math import comb

import mpmath
import pytest

from qcg.errors import PrecisionError, SpecError
from qcg.grass import GrassSpec, spec_range
from qcg.lgmodel import (
    alignment_sign,
    critical_points,
    lg_consistency,
    lg_constants,
    potential,
    reconstruct_q_polynomial,
    roots_to_x,
    vi_sum,
)
from qcg.residues import point_class
from qcg.wpoly import WPolynomial

S24 = GrassSpec(2, 4)
TIGHT = mpmath.mpf("1e-30")


def one(k):
    return WPolynomial.constant(k, 1)


def test_projective_line_points():
    pts = critical_points(GrassSpec(1, 2), 1)
    assert sorted(float(mpmath.re(p.x[0])) for p in pts) == [-1.0, 1.0]
    for p in pts:
        assert abs(p.roots[0] + p.x[0]) < TIGHT


def test_g24_point_count():
    pts = critical_points(S24, 1)
    assert len(pts) == 6
    rho = pts[0].roots[0] ** 4
    assert abs(rho + 1) < TIGHT
    for p in pts:
        assert all(abs(z ** 4 - rho) < TIGHT for z in p.roots)


def test_g23_points_are_cube_roots_of_minus_one():
    pts = critical_points(GrassSpec(2, 3), 1)
    assert len(pts) == 3
    for p in pts:
        assert abs(p.x[0] ** 3 + 1) < TIGHT


def test_zero_q_rejected():
    with pytest.raises(SpecError):
        critical_points(S24, 0)


@pytest.mark.parametrize("spec", list(spec_range(3, 7)), ids=str)
def test_point_certificates(spec):
    pts = critical_points(spec, 1)
    assert len(pts) == comb(spec.n, spec.k)
    sign = alignment_sign(spec.k)
    with mpmath.workdps(60):
        for p in pts:
            assert p.residual < mpmath.mpf("1e-50")
            assert abs(p.hess_value) > mpmath.mpf("1e-10")
            assert abs(p.hess_value - sign * p.jac_value) < mpmath.mpf("1e-45")


def test_permutation_independence():
    with mpmath.workdps(50):
        z = [mpmath.mpc(1, 2), mpmath.mpc(-3, 0.5), mpmath.mpc(0.25, -1)]
        base = roots_to_x(z)
        for perm in permutations(z):
            assert all(abs(a - b) < mpmath.mpf("1e-45") for a, b in zip(roots_to_x(perm), base))


def test_potential_examples():
    x, q = WPolynomial.var(1, 1), WPolynomial.q(1)
    W = potential(GrassSpec(1, 2))
    assert W * 3 == x ** 3 - 3 * q * x
    assert W.derivative(1) == x ** 2 - q


@pytest.mark.parametrize("spec", list(spec_range(3, 7)), ids=str)
def test_lg_consistency(spec):
    r = lg_consistency(spec)
    assert r.symmetric_partials and r.gradient_matches and r.numeric_agreement


@pytest.mark.parametrize("spec", list(spec_range(3, 7)), ids=str)
def test_vi_normalization(spec):
    pts = critical_points(spec, 1)
    c, e = lg_constants(spec.k, spec.n)
    v = vi_sum(point_class(spec), 0, pts, c, e)
    assert abs(v - 1) < TIGHT


def test_vi_examples():
    pts = critical_points(S24, 1)
    c, e = lg_constants(2, 4)
    x1 = WPolynomial.var(2, 1)
    assert abs(vi_sum(one(2), 1, pts, c, e) - 6) < TIGHT
    assert abs(vi_sum(x1 ** 8, 0, pts, c, e) - 8) < TIGHT


def test_vi_is_real_for_real_q():
    pts = critical_points(GrassSpec(3, 6), mpmath.mpf(-2.5))
    c, e = lg_constants(3, 6)
    F = WPolynomial.var(3, 1) ** 5 * WPolynomial.var(3, 2) - WPolynomial.var(3, 3) ** 3
    for g in range(3):
        assert abs(mpmath.im(vi_sum(F, g, pts, c, e))) < TIGHT


def test_reconstruction_examples():
    assert reconstruct_q_polynomial(point_class(S24), 0, S24).poly == 1
    x1 = WPolynomial.var(2, 1)
    assert reconstruct_q_polynomial(x1 ** 8, 0, S24).poly == WPolynomial.qpoly({1: 8})
    assert reconstruct_q_polynomial(x1, 0, S24).poly == 0


@pytest.mark.parametrize("spec", list(spec_range(3, 7)), ids=str)
def test_reconstruct_euler(spec):
    r = reconstruct_q_polynomial(one(spec.k), 1, spec)
    assert r.poly == comb(spec.n, spec.k)
    assert r.residual < TIGHT


def test_undersampled_rejected():
    x1 = WPolynomial.var(2, 1)
    with pytest.raises(SpecError):
        reconstruct_q_polynomial(x1 ** 8, 0, S24, sample_count=1)


def test_snap_failure_reports_raw_coefficients():
    x1 = WPolynomial.var(2, 1)
    with pytest.raises(PrecisionError, match="raw coefficients"):
        reconstruct_q_polynomial(x1 ** 8, 0, S24, precision=20, snap_tol="1e-200")

"""Closed-form ball solutions: constants, admissibility, and the interior balance."""

from fractions import Fraction

import numpy as np
import pytest

from ballsym import (
    DegenerateParameterError,
    InadmissibleBetaError,
    ParameterRangeError,
    ball_integral_identity,
    power_law_c_bound,
    power_source_ball,
    torsion_ball,
)


def test_torsion_ball_constants():
    tb = torsion_ball(2, 1.0)
    assert tb.u0 == 0.25
    assert tb.c == 0.5
    tb32 = torsion_ball(3, 2.0)
    assert tb32.u0 == pytest.approx(2.0 / 3.0)
    assert tb32.c == pytest.approx(1.0 / 3.0)


def test_torsion_ball_boundary_values():
    for dim, radius in [(2, 1.0), (3, 2.0), (4, 0.5)]:
        tb = torsion_ball(dim, radius)
        assert tb.u(radius) == pytest.approx(0.0, abs=1e-15)
        assert tb.du(radius) == pytest.approx(-tb.c * radius, abs=1e-15)


def test_torsion_ball_interior_integral():
    # 1D radial quadrature of 2 pi r u(r) on the unit disk gives pi/8
    tb = torsion_ball(2, 1.0)
    r = np.linspace(0.0, 1.0, 20001)
    integral = 2.0 * np.pi * np.trapezoid(r * tb.u(r), r)
    assert integral == pytest.approx(np.pi / 8.0, abs=1e-9)


def test_power_source_matches_torsion():
    # alpha = 0, c0 = 1/dim reproduces the torsion solution identically;
    # Fraction input exercises the exact rational path
    for dim, radius in [(2, 1.0), (3, 1.0)]:
        ps = power_source_ball(dim, radius, 0.0, Fraction(1, dim))
        tb = torsion_ball(dim, radius)
        assert ps.beta == 0.0
        assert ps.c1 == 0.0
        assert ps.u0 == pytest.approx(tb.u0, abs=0)
        r = np.linspace(0.0, radius, 257)
        assert np.abs(ps.u(r) - tb.u(r)).max() <= 1e-14


def test_power_source_exact_rational_constants():
    ps = power_source_ball(2, 1.0, 2.0, 1.0)
    assert ps.beta == 12.0
    assert ps.beta + ps.alpha + 2.0 == 16.0
    assert ps.c1 == -0.75
    assert ps.u0 == 0.0625
    # u = (1 - r^4)/16 solves the r^2 source problem
    r = np.linspace(0.0, 1.0, 101)
    assert np.abs(ps.u(r) - (1 - r**4) / 16).max() < 1e-16


def test_power_source_n3_case():
    ps = power_source_ball(3, 1.0, 0.0, Fraction(1, 3))
    assert ps.beta == 0.0
    assert ps.c1 == 0.0
    assert ps.u0 == pytest.approx(1.0 / 6.0, abs=0)
    # the float 1/3 carries representation noise but stays admissible
    ps_float = power_source_ball(3, 1.0, 0.0, 1.0 / 3.0)
    assert abs(ps_float.beta) < 1e-14
    assert ps_float.u0 == pytest.approx(1.0 / 6.0, abs=1e-15)


@pytest.mark.parametrize("dim,radius,alpha,c0", [
    (2, 1.0, 0.0, 0.5),
    (2, 1.0, 2.0, 1.0),
    (3, 2.0, 1.0, 0.2),
    (2, 0.7, 0.5, 0.8),
])
def test_scaling_condition_holds_at_boundary(dim, radius, alpha, c0):
    ps = power_source_ball(dim, radius, alpha, c0)
    assert abs(ps.boundary_residual()) <= 1e-12
    assert ps.u(radius) == pytest.approx(0.0, abs=1e-15)


def test_beta_negative_integer_rejected():
    # dim=2, alpha=0: beta = 2 (2 c0 - 1) = -1 at c0 = 1/4
    with pytest.raises(InadmissibleBetaError):
        power_source_ball(2, 1.0, 0.0, 0.25)
    # near-integer negative beta from float noise is also rejected
    with pytest.raises(InadmissibleBetaError):
        power_source_ball(2, 1.0, 0.0, 0.25 + 1e-12)
    # a clearly non-integer negative beta is fine: c0 = 0.375 -> beta = -0.5
    ps = power_source_ball(2, 1.0, 0.0, 0.375)
    assert ps.beta == pytest.approx(-0.5)


def test_degenerate_c0():
    with pytest.raises(DegenerateParameterError):
        power_source_ball(2, 1.0, 1.0, 0.0)


def test_ball_integral_identity_values():
    lhs, rhs = ball_integral_identity(2, 1.0)
    assert lhs == pytest.approx(np.pi / 8.0, abs=1e-13)
    assert rhs == pytest.approx(np.pi / 8.0, abs=1e-13)
    # scaling law: both sides grow like radius^(dim+2)
    lhs2, rhs2 = ball_integral_identity(2, 2.0)
    assert lhs2 == pytest.approx(2.0 * np.pi, rel=1e-13)
    assert rhs2 == pytest.approx(2.0 * np.pi, rel=1e-13)


@pytest.mark.parametrize("dim", [2, 3])
@pytest.mark.parametrize("radius", [0.5, 1.0, 2.0])
def test_ball_integral_identity_agreement(dim, radius):
    lhs, rhs = ball_integral_identity(dim, radius)
    assert abs(lhs - rhs) <= 1e-12 * abs(lhs)


def test_power_law_c_bound_values():
    # alpha = 1 removes the diameter dependence and gives 1/dim
    assert power_law_c_bound(1.0, 2, 7.0) == pytest.approx(0.5, abs=1e-15)
    assert power_law_c_bound(1.0, 3, 5.0) == pytest.approx(1.0 / 3.0, abs=1e-15)
    assert power_law_c_bound(2.0, 2, 2.0) == pytest.approx(0.25, abs=1e-15)


def test_power_law_c_bound_range():
    with pytest.raises(ParameterRangeError):
        power_law_c_bound(0.5, 2, 1.0)
    with pytest.raises(ParameterRangeError):
        power_law_c_bound(1.0, 2, -1.0)


def test_constructor_validation():
    with pytest.raises(ParameterRangeError):
        torsion_ball(1, 1.0)
    with pytest.raises(ParameterRangeError):
        torsion_ball(2, 0.0)
    with pytest.raises(ParameterRangeError):
        power_source_ball(2, 1.0, -1.0, 1.0)

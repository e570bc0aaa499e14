"""Closed-form radial solutions on centered balls.

These are the analytic endpoints everything else is compared against:
the torsion-type solution of Delta u = -1 and the power-source solution of
Delta u = -r^alpha with the scaling boundary condition
x . grad u + c0 r^(alpha+2) + c1 = 0. Derived constants are computed through
exact rational arithmetic whenever the inputs allow it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DegenerateParameterError, InadmissibleBetaError, ParameterRangeError
from .geometry import BallDomain

_INTEGER_TOL = 1e-9


def _composite_gauss(f, a: float, b: float, n: int = 2048) -> float:
    """Composite 4-point Gauss-Legendre rule with n total nodes.

    Exact for polynomials of degree <= 7 on each panel, so the polynomial
    integrands used here sit far below any quadrature error floor.
    """
    panels = max(1, n // 4)
    x4, w4 = np.polynomial.legendre.leggauss(4)
    edges = np.linspace(a, b, panels + 1)
    mid = 0.5 * (edges[:-1] + edges[1:])
    half = 0.5 * (edges[1:] - edges[:-1])
    nodes = (mid[:, None] + half[:, None] * x4[None, :]).ravel()
    weights = (half[:, None] * w4[None, :]).ravel()
    return float(np.sum(weights * f(nodes)))


@dataclass(frozen=True)
class TorsionBall:
    """u(r) = u0 - r^2/(2 dim) on the ball of the given radius.

    Solves Delta u = -1 with u = 0 at r = radius; the normal derivative there
    is -radius/dim = -c * radius with c = 1/dim, independent of the radius.
    """

    dim: int
    radius: float
    u0: float
    c: float

    def u(self, r):
        r = np.asarray(r, dtype=float)
        return self.u0 - r**2 / (2.0 * self.dim)

    def du(self, r):
        r = np.asarray(r, dtype=float)
        return -r / self.dim


@dataclass(frozen=True)
class PowerSourceBall:
    """u(r) = u0 - c0 r^(alpha+2) / (beta+alpha+2) on the ball.

    Solves Delta u = -r^alpha with u = 0 at r = radius and
    x . grad u + c0 r^(alpha+2) + c1 = 0 there, where
    beta = (alpha+2) (c0 (alpha+dim) - 1). The denominator satisfies
    beta + alpha + 2 = c0 (alpha+2) (alpha+dim), nonzero whenever c0 != 0.
    """

    dim: int
    radius: float
    alpha: float
    c0: float
    beta: float
    c1: float
    u0: float

    def u(self, r):
        r = np.asarray(r, dtype=float)
        return self.u0 - self.c0 * r ** (self.alpha + 2.0) / (self.beta + self.alpha + 2.0)

    def du(self, r):
        r = np.asarray(r, dtype=float)
        return (-self.c0 * (self.alpha + 2.0) / (self.beta + self.alpha + 2.0)
                * r ** (self.alpha + 1.0))

    def boundary_residual(self) -> float:
        """x . grad u + c0 r^(alpha+2) + c1 evaluated at r = radius."""
        rb = self.radius
        return float(rb * self.du(rb) + self.c0 * rb ** (self.alpha + 2.0) + self.c1)


def torsion_ball(dim: int, radius: float) -> TorsionBall:
    """Closed-form constant-source solution on a centered ball."""
    if dim < 2:
        raise ParameterRangeError("dimension must be at least 2")
    if not (radius > 0):
        raise ParameterRangeError("radius must be positive")
    return TorsionBall(dim=dim, radius=float(radius),
                       u0=radius**2 / (2.0 * dim), c=1.0 / dim)


def power_source_ball(dim: int, radius: float, alpha: float, c0: float) -> PowerSourceBall:
    """Closed-form power-source solution on a centered ball.

    The derived exponent beta = (alpha+2)(c0(alpha+dim)-1) must not be a
    negative integer. Inputs are carried through exact rational arithmetic
    (every float is a dyadic rational), so integrality of beta is decided
    exactly; a 1e-9 guard additionally rejects negative beta within rounding
    distance of an integer, where the exact test cannot be trusted to
    reflect the intended parameter values.
    """
    if dim < 2:
        raise ParameterRangeError("dimension must be at least 2")
    if not (radius > 0):
        raise ParameterRangeError("radius must be positive")
    if alpha < 0:
        raise ParameterRangeError("alpha must be >= 0")
    if c0 == 0:
        raise DegenerateParameterError("c0 = 0 collapses the boundary condition")

    alpha_f = Fraction(alpha)
    c0_f = Fraction(c0)
    beta_f = (alpha_f + 2) * (c0_f * (alpha_f + dim) - 1)
    beta = float(beta_f)
    if beta_f < 0:
        if beta_f.denominator == 1:
            raise InadmissibleBetaError(f"beta = {beta_f} is a negative integer")
        nearest = round(beta)
        if nearest < 0 and abs(beta - nearest) <= _INTEGER_TOL:
            raise InadmissibleBetaError(
                f"beta = {beta!r} is within {_INTEGER_TOL} of a negative integer"
            )

    denom_f = beta_f + alpha_f + 2  # equals c0 (alpha+2) (alpha+dim), nonzero
    if (alpha_f + 2).denominator == 1:
        radius_pow = Fraction(radius) ** int(alpha_f + 2)
        u0 = float(c0_f * radius_pow / denom_f)
        c1 = float(-c0_f * beta_f * radius_pow / denom_f)
    else:
        radius_pow = float(radius) ** (float(alpha) + 2.0)
        u0 = c0 * radius_pow / float(denom_f)
        c1 = -c0 * beta * radius_pow / float(denom_f)

    return PowerSourceBall(dim=dim, radius=float(radius), alpha=float(alpha),
                           c0=float(c0), beta=beta, c1=c1, u0=u0)


def ball_integral_identity(dim: int, radius: float, n_quad: int = 2048) -> tuple[float, float]:
    """Interior balance on the ball: (integral of u, c^2 integral of r^2).

    Both sides are computed by 1D radial quadrature against the constant-source
    solution; they agree to rounding because the domain is a centered ball.
    """
    sol = torsion_ball(dim, radius)
    ball = BallDomain(dim=dim, radius=float(radius))
    surface = ball.surface_area() / radius ** (dim - 1)  # dim * unit-ball volume
    lhs = surface * _composite_gauss(lambda r: sol.u(r) * r ** (dim - 1), 0.0, radius, n_quad)
    rhs = sol.c**2 * surface * _composite_gauss(lambda r: r ** (dim + 1), 0.0, radius, n_quad)
    return lhs, rhs


def power_law_c_bound(alpha: float, dim: int, diameter: float) -> float:
    """Admissible upper bound for the constant in the law du/dnu = -c r^alpha:

        2^(alpha-1) / (diameter^(alpha-1) sqrt(alpha dim (dim + 2 alpha - 2)))

    valid for alpha >= 1. At alpha = 1 it reduces to 1/dim.
    """
    if alpha < 1:
        raise ParameterRangeError("the bound is derived for alpha >= 1")
    if dim < 2:
        raise ParameterRangeError("dimension must be at least 2")
    if not (diameter > 0):
        raise ParameterRangeError("diameter must be positive")
    return (2.0 ** (alpha - 1.0)
            / (diameter ** (alpha - 1.0)
               * math.sqrt(alpha * dim * (dim + 2.0 * alpha - 2.0))))

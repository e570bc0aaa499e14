"""Star-shaped planar domains with Fourier boundary parameterization.

The boundary is the curve r = rho(theta) with

    rho(theta) = a0 + sum_k (cos_coeffs[k-1] cos k*theta + sin_coeffs[k-1] sin k*theta)

All boundary quadrature is the periodic trapezoid rule, which is spectrally
accurate for these analytic radius functions, so no mesh is ever needed.
Domains are immutable; every operation is a pure function of the coefficients.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import InvalidDomainError

# Validity is checked on a fixed dense grid; the positivity floor is relative
# to the mean radius a0 so that dilated domains validate identically.
_VALIDITY_GRID = 4096
_POSITIVITY_FLOOR = 1e-6
_DIAMETER_GRID = 1024


class BoundaryGrid(NamedTuple):
    """Vectorized boundary sample: equally spaced in theta, trapezoid weights."""

    theta: np.ndarray     # (m,) node angles
    position: np.ndarray  # (m, 2) points on the curve
    normal: np.ndarray    # (m, 2) unit outward normals
    weight: np.ndarray    # (m,) arc-length quadrature weights, sum = perimeter
    r: np.ndarray         # (m,) distance of each node to the origin


@dataclass(frozen=True)
class BoundaryNode:
    """A single boundary quadrature node."""

    theta: float
    position: np.ndarray
    normal: np.ndarray
    weight: float
    r: float


@dataclass(frozen=True)
class StarDomain2D:
    """Planar star-shaped domain bounded by a truncated Fourier radius.

    Construction fails with InvalidDomainError unless rho stays above
    1e-6 * a0 on a dense angular grid, which guarantees the origin is
    strictly interior. The finite Fourier series makes the boundary smooth.
    """

    a0: float
    cos_coeffs: tuple[float, ...] = ()
    sin_coeffs: tuple[float, ...] = ()
    quad_points: int = 1024

    def __post_init__(self):
        object.__setattr__(self, "cos_coeffs", tuple(float(c) for c in self.cos_coeffs))
        object.__setattr__(self, "sin_coeffs", tuple(float(c) for c in self.sin_coeffs))
        object.__setattr__(self, "a0", float(self.a0))
        if self.quad_points < 8:
            raise InvalidDomainError("quad_points must be at least 8")
        if not (self.a0 > 0):
            raise InvalidDomainError(f"mean radius a0 = {self.a0} must be positive")
        theta = np.linspace(0.0, 2.0 * np.pi, _VALIDITY_GRID, endpoint=False)
        rho = self.radius(theta)
        if rho.min() < _POSITIVITY_FLOOR * self.a0:
            raise InvalidDomainError(
                f"radius dips to {rho.min():.3e}; boundary must stay strictly "
                "positive so the origin is interior"
            )

    # -- radius function -------------------------------------------------

    @classmethod
    def circle(cls, radius: float = 1.0, quad_points: int = 1024) -> "StarDomain2D":
        return cls(a0=radius, quad_points=quad_points)

    def radius(self, theta) -> np.ndarray:
        """rho(theta), vectorized."""
        theta = np.asarray(theta, dtype=float)
        rho = np.full_like(theta, self.a0)
        for k, a in enumerate(self.cos_coeffs, start=1):
            rho += a * np.cos(k * theta)
        for k, b in enumerate(self.sin_coeffs, start=1):
            rho += b * np.sin(k * theta)
        return rho

    def radius_deriv(self, theta) -> np.ndarray:
        """d rho / d theta, vectorized."""
        theta = np.asarray(theta, dtype=float)
        drho = np.zeros_like(theta)
        for k, a in enumerate(self.cos_coeffs, start=1):
            drho -= a * k * np.sin(k * theta)
        for k, b in enumerate(self.sin_coeffs, start=1):
            drho += b * k * np.cos(k * theta)
        return drho

    @property
    def fourier_energy(self) -> float:
        """Sum of squared non-constant Fourier coefficients; 0 iff a circle."""
        return float(
            sum(a * a for a in self.cos_coeffs) + sum(b * b for b in self.sin_coeffs)
        )

    def scaled(self, factor: float) -> "StarDomain2D":
        """Dilation of the domain about the origin by the given factor."""
        return StarDomain2D(
            a0=self.a0 * factor,
            cos_coeffs=tuple(a * factor for a in self.cos_coeffs),
            sin_coeffs=tuple(b * factor for b in self.sin_coeffs),
            quad_points=self.quad_points,
        )

    # -- boundary sampling ------------------------------------------------

    def boundary_grid(self, m: int | None = None) -> BoundaryGrid:
        """Equally spaced boundary sample with outward normals and weights.

        The weight sqrt(rho^2 + rho'^2) * (2 pi / m) is the periodic
        trapezoid rule for the arc-length element, so sum(weight) converges
        spectrally to the perimeter.
        """
        m = self.quad_points if m is None else int(m)
        if m < 8:
            raise InvalidDomainError("need at least 8 boundary nodes")
        theta = np.arange(m) * (2.0 * np.pi / m)
        rho = self.radius(theta)
        if rho.min() <= 0:
            raise InvalidDomainError("non-positive radius at a boundary node")
        drho = self.radius_deriv(theta)
        ct, st = np.cos(theta), np.sin(theta)
        position = np.stack([rho * ct, rho * st], axis=1)
        # Tangent (drho*ct - rho*st, drho*st + rho*ct) rotated by -90 degrees
        # points outward for a counterclockwise curve.
        nx = drho * st + rho * ct
        ny = rho * st - drho * ct
        norm = np.hypot(nx, ny)
        normal = np.stack([nx / norm, ny / norm], axis=1)
        weight = np.hypot(rho, drho) * (2.0 * np.pi / m)
        return BoundaryGrid(theta=theta, position=position, normal=normal,
                            weight=weight, r=rho.copy())

    def boundary_nodes(self, m: int | None = None) -> list[BoundaryNode]:
        """Boundary sample as individual nodes (see boundary_grid)."""
        g = self.boundary_grid(m)
        return [
            BoundaryNode(theta=float(g.theta[i]), position=g.position[i],
                         normal=g.normal[i], weight=float(g.weight[i]),
                         r=float(g.r[i]))
            for i in range(len(g.theta))
        ]

    # -- integral quantities ----------------------------------------------

    def _theta_grid(self, m: int | None = None) -> np.ndarray:
        m = self.quad_points if m is None else int(m)
        return np.arange(m) * (2.0 * np.pi / m)

    def area(self, m: int | None = None) -> float:
        """|Omega| = 1/2 integral of rho^2 d theta."""
        theta = self._theta_grid(m)
        rho = self.radius(theta)
        return float(0.5 * np.sum(rho**2) * (2.0 * np.pi / len(theta)))

    def moment_r2(self, m: int | None = None) -> float:
        """Integral of r^2 over the domain = 1/4 integral of rho^4 d theta."""
        theta = self._theta_grid(m)
        rho = self.radius(theta)
        return float(0.25 * np.sum(rho**4) * (2.0 * np.pi / len(theta)))

    def radial_moment(self, power: float, m: int | None = None) -> float:
        """Integral of r^power over the domain, power > -2."""
        if power <= -2:
            raise ValueError("radial moment diverges for power <= -2")
        theta = self._theta_grid(m)
        rho = self.radius(theta)
        return float(np.sum(rho ** (power + 2.0)) / (power + 2.0)
                     * (2.0 * np.pi / len(theta)))

    def boundary_moment(self, alpha: float, m: int | None = None) -> float:
        """Integral of r^alpha over the boundary curve."""
        if alpha < 0:
            raise ValueError("boundary moment requires alpha >= 0")
        theta = self._theta_grid(m)
        rho = self.radius(theta)
        drho = self.radius_deriv(theta)
        return float(np.sum(rho**alpha * np.hypot(rho, drho))
                     * (2.0 * np.pi / len(theta)))

    def perimeter(self, m: int | None = None) -> float:
        return self.boundary_moment(0.0, m)

    def diameter(self) -> float:
        """Largest pairwise distance over a dense boundary grid.

        Exact for the grid; a lower bound for the true diameter that
        converges with grid density (only feeds conservative bounds).
        """
        theta = np.arange(_DIAMETER_GRID) * (2.0 * np.pi / _DIAMETER_GRID)
        rho = self.radius(theta)
        pts = np.stack([rho * np.cos(theta), rho * np.sin(theta)], axis=1)
        diff = pts[:, None, :] - pts[None, :, :]
        return float(np.sqrt((diff**2).sum(axis=2)).max())

    def max_radius(self) -> float:
        theta = np.linspace(0.0, 2.0 * np.pi, _VALIDITY_GRID, endpoint=False)
        return float(self.radius(theta).max())

    def min_radius(self) -> float:
        theta = np.linspace(0.0, 2.0 * np.pi, _VALIDITY_GRID, endpoint=False)
        return float(self.radius(theta).min())

    # -- serialization ------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "a0": self.a0,
            "cos": list(self.cos_coeffs),
            "sin": list(self.sin_coeffs),
            "quad_points": self.quad_points,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "StarDomain2D":
        return cls(
            a0=data["a0"],
            cos_coeffs=tuple(data.get("cos", ())),
            sin_coeffs=tuple(data.get("sin", ())),
            quad_points=int(data.get("quad_points", 1024)),
        )


@dataclass(frozen=True)
class BallDomain:
    """Centered ball in dimension dim >= 2, for exact radial computations."""

    dim: int
    radius: float

    def __post_init__(self):
        if self.dim < 2:
            raise InvalidDomainError("ball dimension must be at least 2")
        if not (self.radius > 0):
            raise InvalidDomainError("ball radius must be positive")

    @property
    def unit_volume(self) -> float:
        """Volume of the unit ball in this dimension."""
        return math.pi ** (self.dim / 2.0) / math.gamma(self.dim / 2.0 + 1.0)

    def volume(self) -> float:
        return self.unit_volume * self.radius**self.dim

    def surface_area(self) -> float:
        return self.dim * self.unit_volume * self.radius ** (self.dim - 1)

    def diameter(self) -> float:
        return 2.0 * self.radius

"""Collocation solver for Delta u = -r^alpha, u = 0 on a star-shaped boundary.

The representation is

    u = particular + harmonic,
    particular = -r^(alpha+2) / ((alpha+2)^2)               (dimension 2)
    harmonic   = c0 + sum_k r^k (a_k cos k*theta + b_k sin k*theta)

so the interior equation holds exactly by construction and only the Dirichlet
condition is fitted, by least squares at boundary collocation nodes. Every
interior identity test therefore isolates boundary effects. Derivatives are
analytic: the harmonic part is the real part of a complex polynomial, the
particular part a radial power.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import IllConditionedBasisError, ParameterRangeError
from .geometry import BoundaryGrid, StarDomain2D

# Over-determination factor for the collocation fit: 8 nodes per basis column
# pair keeps the least-squares system well conditioned.
COLLOCATION_FACTOR = 8


def _as_points(points) -> tuple[np.ndarray, bool]:
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        return pts.reshape(1, 2), True
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise ValueError("points must have shape (2,) or (n, 2)")
    return pts, False


@dataclass(frozen=True)
class PoissonSolution2D:
    """Solution descriptor: source exponent, particular coefficient, and
    harmonic-basis coefficients. Immutable; evaluation is thread-safe."""

    alpha: float
    particular_coeff: float
    c0: float
    cos_coeffs: tuple[float, ...]
    sin_coeffs: tuple[float, ...]
    domain: StarDomain2D
    fit_residual: float

    @property
    def k_basis(self) -> int:
        return len(self.cos_coeffs)

    def _complex_coeffs(self) -> np.ndarray:
        # Re(gamma_k z^k) = a_k Re z^k + b_k Im z^k with gamma_k = a_k - i b_k
        gamma = np.empty(self.k_basis + 1, dtype=complex)
        gamma[0] = self.c0
        gamma[1:] = np.asarray(self.cos_coeffs) - 1j * np.asarray(self.sin_coeffs)
        return gamma

    # -- evaluation ---------------------------------------------------------

    def eval_u(self, points):
        """u at a point (2,) or points (n, 2).

        The expansion extends smoothly past the boundary; keeping points in
        the closure of the domain is the caller's responsibility.
        """
        pts, single = _as_points(points)
        z = pts[:, 0] + 1j * pts[:, 1]
        gamma = self._complex_coeffs()
        powers = z[:, None] ** np.arange(self.k_basis + 1)[None, :]
        harm = (powers * gamma[None, :]).real.sum(axis=1)
        r = np.abs(z)
        val = harm + self.particular_coeff * r ** (self.alpha + 2.0)
        return float(val[0]) if single else val

    def eval_grad(self, points):
        """Gradient of u at a point (-> shape (2,)) or points (-> (n, 2))."""
        pts, single = _as_points(points)
        z = pts[:, 0] + 1j * pts[:, 1]
        gamma = self._complex_coeffs()
        ks = np.arange(1, self.k_basis + 1)
        # d/dz of the holomorphic part; grad(Re f) = (Re f', -Im f')
        dpow = z[:, None] ** (ks - 1)[None, :]
        fprime = (dpow * (gamma[1:] * ks)[None, :]).sum(axis=1)
        grad = np.stack([fprime.real, -fprime.imag], axis=1)
        s = self.alpha + 2.0
        r = np.abs(z)
        grad += self.particular_coeff * s * (r**self.alpha)[:, None] * pts
        return grad[0] if single else grad

    def eval_hessian(self, points):
        """Hessian of u at a point (-> (2, 2)) or points (-> (n, 2, 2)).

        The trace equals -r^alpha exactly since the harmonic part is
        trace-free and the particular part was built for that source.
        """
        pts, single = _as_points(points)
        z = pts[:, 0] + 1j * pts[:, 1]
        gamma = self._complex_coeffs()
        hess = np.zeros((len(z), 2, 2))
        if self.k_basis >= 2:
            ks = np.arange(2, self.k_basis + 1)
            d2pow = z[:, None] ** (ks - 2)[None, :]
            fsecond = (d2pow * (gamma[2:] * ks * (ks - 1))[None, :]).sum(axis=1)
            # u_xx = Re f'', u_xy = -Im f'', u_yy = -Re f''
            hess[:, 0, 0] = fsecond.real
            hess[:, 0, 1] = hess[:, 1, 0] = -fsecond.imag
            hess[:, 1, 1] = -fsecond.real
        s = self.alpha + 2.0
        r = np.abs(z)
        ralpha = r**self.alpha
        hess[:, 0, 0] += self.particular_coeff * s * ralpha
        hess[:, 1, 1] += self.particular_coeff * s * ralpha
        if s != 2.0:
            # r^(alpha-2) x_i x_j stays bounded as r -> 0; guard the 0/0 form.
            rsafe = np.where(r > 0, r, 1.0)
            outer = pts[:, :, None] * pts[:, None, :]
            radial = np.where(r > 0, rsafe ** (self.alpha - 2.0), 0.0)
            hess += (self.particular_coeff * s * (s - 2.0)
                     * radial[:, None, None] * outer)
        return hess[0] if single else hess

    def normal_derivative(self, nodes) -> np.ndarray:
        """du/dnu = grad u . nu at boundary nodes (BoundaryGrid or node list)."""
        if isinstance(nodes, BoundaryGrid):
            position, normal = nodes.position, nodes.normal
        else:
            position = np.stack([n.position for n in nodes])
            normal = np.stack([n.normal for n in nodes])
        grad = self.eval_grad(position)
        return np.einsum("ij,ij->i", grad, normal)

    def laplacian(self, points):
        """Source value -r^alpha (the PDE holds identically)."""
        pts, single = _as_points(points)
        r = np.hypot(pts[:, 0], pts[:, 1])
        val = -(r**self.alpha)
        return float(val[0]) if single else val

    # -- serialization --------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "particular_coeff": self.particular_coeff,
            "harmonic_coeffs": {
                "c0": self.c0,
                "cos": list(self.cos_coeffs),
                "sin": list(self.sin_coeffs),
            },
            "domain": self.domain.to_dict(),
            "fit_residual": self.fit_residual,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "PoissonSolution2D":
        h = data["harmonic_coeffs"]
        return cls(
            alpha=float(data["alpha"]),
            particular_coeff=float(data["particular_coeff"]),
            c0=float(h["c0"]),
            cos_coeffs=tuple(h["cos"]),
            sin_coeffs=tuple(h["sin"]),
            domain=StarDomain2D.from_dict(data["domain"]),
            fit_residual=float(data["fit_residual"]),
        )


def solve(domain: StarDomain2D, alpha: float = 0.0, k_basis: int = 24) -> PoissonSolution2D:
    """Fit the harmonic coefficients so u vanishes at boundary collocation nodes.

    Columns are normalized by their max over the nodes before the orthogonal
    least-squares solve; the r^k columns are otherwise badly scaled once
    k_basis grows past ~16. Raises IllConditionedBasisError when the scaled
    system is rank deficient (lower k_basis in that case).
    """
    if alpha < 0:
        raise ParameterRangeError("source exponent alpha must be >= 0")
    if k_basis < 4:
        raise ParameterRangeError("k_basis must be at least 4")
    m = COLLOCATION_FACTOR * k_basis
    grid = domain.boundary_grid(m)
    z = grid.position[:, 0] + 1j * grid.position[:, 1]
    powers = z[:, None] ** np.arange(1, k_basis + 1)[None, :]

    ncols = 2 * k_basis + 1
    a_mat = np.empty((m, ncols))
    a_mat[:, 0] = 1.0
    a_mat[:, 1 : k_basis + 1] = powers.real
    a_mat[:, k_basis + 1 :] = powers.imag

    particular_coeff = -1.0 / ((alpha + 2.0) ** 2)
    rhs = -particular_coeff * grid.r ** (alpha + 2.0)

    scale = np.abs(a_mat).max(axis=0)
    scale[scale == 0.0] = 1.0
    coef_scaled, _, rank, _ = np.linalg.lstsq(a_mat / scale, rhs, rcond=None)
    if rank < ncols:
        raise IllConditionedBasisError(
            f"collocation matrix rank {rank} < {ncols}; lower k_basis"
        )
    coef = coef_scaled / scale
    fit_residual = float(np.abs(a_mat @ coef - rhs).max())

    return PoissonSolution2D(
        alpha=float(alpha),
        particular_coeff=particular_coeff,
        c0=float(coef[0]),
        cos_coeffs=tuple(coef[1 : k_basis + 1]),
        sin_coeffs=tuple(coef[k_basis + 1 :]),
        domain=domain,
        fit_residual=fit_residual,
    )

"""Deficit-driven shape recovery: iterate a star domain toward the circle.

The boundary condition itself supplies a target radius at each angle:
if du/dnu = -f(r) held, the node at angle theta would satisfy
-du/dnu(theta) = f(rho(theta)), so for the family laws

    rho_hat(theta) = -du/dnu(theta) / c*

is the radius profile consistent with the measured flux. One step blends the
current radius with the target, re-projects onto a truncated Fourier series,
damps the translation mode, and optionally renormalizes area. The loop keeps
a fixed point exactly at centered circles, where the deficit vanishes;
watching the deficit along accepted steps makes the iteration a numerical
witness that the circle is the only admissible shape.

Relaxation is adaptive: a step that produces an invalid domain or increases
the deficit is rejected and retried with half the relaxation (which then
stays reduced; the full-strength update amplifies high Fourier modes, the
halved one contracts them).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidDomainError, RecoveryStepError
from .geometry import StarDomain2D
from .identities import BoundaryLaw, compatibility_c, serrin_deficit
from .poisson2d import solve

_PROJECTION_NODES = 256
_MODE1_DAMPING = 0.5
_MAX_HALVINGS = 5
_DEFICIT_INCREASE_TOL = 1e-12


@dataclass(frozen=True)
class RecoveryConfig:
    """Knobs for the fixed-point iteration."""

    law: BoundaryLaw
    relaxation: float = 0.5
    max_iters: int = 200
    deficit_tol: float = 1e-8
    k_basis: int = 16
    renormalize_area: bool = True
    k_geom: int = 12

    def __post_init__(self):
        if not (0.0 < self.relaxation <= 1.0):
            raise ValueError("relaxation must lie in (0, 1]")
        if not (self.deficit_tol > 0):
            raise ValueError("deficit_tol must be positive")
        if self.law.kind not in ("constant-c", "linear-cr"):
            raise ValueError("recovery supports the constant-c and linear-cr laws")


@dataclass(frozen=True)
class IterateRecord:
    domain: StarDomain2D
    deficit: float
    c_star: float
    cn: float


@dataclass(frozen=True)
class RecoveryTrace:
    """Sequence of accepted iterates; the limit shape witnesses the ball."""

    iterates: tuple[IterateRecord, ...]
    converged: bool
    final_fourier_energy: float

    @property
    def deficits(self) -> list[float]:
        return [it.deficit for it in self.iterates]

    @property
    def final_domain(self) -> StarDomain2D:
        return self.iterates[-1].domain

    def to_dict(self) -> dict:
        return {
            "converged": self.converged,
            "final_fourier_energy": self.final_fourier_energy,
            "iterates": [
                {
                    "domain": it.domain.to_dict(),
                    "deficit": it.deficit,
                    "c_star": it.c_star,
                    "cn": it.cn,
                }
                for it in self.iterates
            ],
        }

    def csv_rows(self) -> list[list]:
        """Per-iteration rows: iter, deficit, cn, a0, fourier_energy."""
        return [
            [i, it.deficit, it.cn, it.domain.a0, it.domain.fourier_energy]
            for i, it in enumerate(self.iterates)
        ]


def _project_fourier(values: np.ndarray, k_geom: int) -> tuple[float, np.ndarray, np.ndarray]:
    """Least-squares Fourier coefficients of samples on the uniform theta grid."""
    m = len(values)
    spec = np.fft.rfft(values)
    a0 = float(spec[0].real) / m
    k = min(k_geom, m // 2 - 1)
    a = 2.0 * spec[1 : k + 1].real / m
    b = -2.0 * spec[1 : k + 1].imag / m
    if k < k_geom:
        a = np.pad(a, (0, k_geom - k))
        b = np.pad(b, (0, k_geom - k))
    return a0, a, b


def _solve_state(domain: StarDomain2D, cfg: RecoveryConfig):
    sol = solve(domain, alpha=0.0, k_basis=cfg.k_basis)
    c_star = compatibility_c(domain, 0.0, cfg.law)
    deficit = serrin_deficit(sol, cfg.law)
    return sol, c_star, deficit


def _candidate(domain: StarDomain2D, sol, c_star: float, lam: float,
               cfg: RecoveryConfig, target_area: float) -> StarDomain2D:
    """One blended, re-projected, re-centered, re-scaled update. May raise
    InvalidDomainError, which the caller treats as a rejected step."""
    grid = domain.boundary_grid(_PROJECTION_NODES)
    rho_hat = -sol.normal_derivative(grid) / c_star
    rho_new = (1.0 - lam) * grid.r + lam * rho_hat
    a0, a, b = _project_fourier(rho_new, cfg.k_geom)
    # The radial law singles out circles centered at the origin; damping the
    # translation mode pulls iterates back toward it.
    a[0] *= _MODE1_DAMPING
    b[0] *= _MODE1_DAMPING
    candidate = StarDomain2D(a0=a0, cos_coeffs=tuple(a), sin_coeffs=tuple(b),
                             quad_points=domain.quad_points)
    if cfg.renormalize_area:
        factor = np.sqrt(target_area / candidate.area())
        candidate = candidate.scaled(factor)
    return candidate


def recover(initial: StarDomain2D, cfg: RecoveryConfig) -> RecoveryTrace:
    """Run the fixed-point iteration until the deficit drops below tolerance.

    Returns the trace of accepted iterates. Raises RecoveryStepError when a
    step cannot be accepted after the relaxation has been halved five times,
    and propagates solver failures with the iteration index attached.
    """
    target_area = initial.area()
    lam = cfg.relaxation

    try:
        sol, c_star, deficit = _solve_state(initial, cfg)
    except Exception as exc:
        raise RecoveryStepError(f"initial solve failed: {exc}", iteration=0) from exc

    domain = initial
    records = [IterateRecord(domain=domain, deficit=deficit, c_star=c_star,
                             cn=2.0 * c_star)]

    for iteration in range(cfg.max_iters):
        if deficit < cfg.deficit_tol:
            break
        accepted = False
        for _ in range(_MAX_HALVINGS + 1):
            try:
                candidate = _candidate(domain, sol, c_star, lam, cfg, target_area)
            except InvalidDomainError:
                lam *= 0.5
                continue
            try:
                cand_sol, cand_c, cand_deficit = _solve_state(candidate, cfg)
            except InvalidDomainError:
                lam *= 0.5
                continue
            except Exception as exc:
                raise RecoveryStepError(f"solve failed: {exc}", iteration=iteration) from exc
            if cand_deficit > deficit + _DEFICIT_INCREASE_TOL:
                lam *= 0.5
                continue
            domain, sol, c_star, deficit = candidate, cand_sol, cand_c, cand_deficit
            records.append(IterateRecord(domain=domain, deficit=deficit,
                                         c_star=c_star, cn=2.0 * c_star))
            accepted = True
            break
        if not accepted:
            raise RecoveryStepError(
                "step rejected after five relaxation halvings", iteration=iteration)

    return RecoveryTrace(
        iterates=tuple(records),
        converged=bool(deficit < cfg.deficit_tol),
        final_fourier_energy=domain.fourier_energy,
    )


def deficit_landscape(base: StarDomain2D, mode_k: int, amplitudes,
                      law: BoundaryLaw, k_basis: int = 24) -> list[tuple[float, float]]:
    """Deficit along a one-parameter family rho = base + eps cos(k theta).

    Mode 1 is a translation, not a shape change, so mode_k starts at 2.
    Amplitudes that break domain validity are kept in the output with a NaN
    deficit marker.
    """
    if mode_k < 2:
        raise ValueError("mode_k must be >= 2 (mode 1 is a translation)")
    results: list[tuple[float, float]] = []
    for eps in amplitudes:
        cos = list(base.cos_coeffs) + [0.0] * max(0, mode_k - len(base.cos_coeffs))
        cos[mode_k - 1] += eps
        try:
            domain = StarDomain2D(a0=base.a0, cos_coeffs=tuple(cos),
                                  sin_coeffs=base.sin_coeffs,
                                  quad_points=base.quad_points)
        except InvalidDomainError:
            results.append((float(eps), float("nan")))
            continue
        sol = solve(domain, alpha=0.0, k_basis=k_basis)
        results.append((float(eps), serrin_deficit(sol, law)))
    return results

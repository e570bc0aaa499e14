"""Single source of truth for every numerical tolerance.

The verification report, the CLI exit-code logic, and the test suite all read
from this record so a threshold is never duplicated.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass


@dataclass(frozen=True)
class Tolerances:
    # Identities that hold on every domain once u vanishes on the boundary.
    interior_identity_rel: float = 1e-8   # |int h - (dim+2) int u| / |int h|
    energy_identity_rel: float = 1e-8     # quadrature of Phi vs its decomposition
    harmonicity_fd: float = 1e-6          # finite-difference Laplacian ceiling
    pde_fd: float = 1e-6                  # FD Laplacian vs -r^alpha
    hessian_slack: float = 1e-10          # |Hess|^2 >= (Delta u)^2/dim - slack
    dirichlet_factor: float = 10.0        # off-collocation boundary misfit cap

    # Compatibility-constant bound and its equality case on circles.
    cn_upper_slack: float = 1e-9
    cn_circle_equal: float = 1e-8

    # Symmetry gate: the overdetermined condition itself.
    deficit_tol: float = 1e-8

    # General-law admissibility checker.
    general_law_tol: float = 1e-10

    # Finite-difference stencil geometry.
    fd_step: float = 1e-4
    fd_margin_factor: float = 10.0        # samples kept >= factor*step from boundary

    def to_dict(self) -> dict:
        return asdict(self)

"""Numerical verification of overdetermined Poisson boundary problems.

Solves Delta u = -r^alpha with u = 0 on star-shaped planar domains, evaluates
the integral identities and maximum-principle functionals that force such a
domain to be a ball when a radial normal-derivative law also holds, and
recovers the circle from perturbed shapes by a deficit-driven fixed-point
iteration.
"""

from .errors import (
    BallsymError,
    DegenerateParameterError,
    IllConditionedBasisError,
    InadmissibleBetaError,
    InvalidDomainError,
    LawEvaluationError,
    ParameterRangeError,
    RecoveryStepError,
)
from .geometry import BallDomain, BoundaryGrid, BoundaryNode, StarDomain2D
from .identities import (
    BoundaryLaw,
    GeneralLawResult,
    IdentityReport,
    aux_h,
    boundary_integral_rh,
    compatibility_c,
    fd_laplacian,
    general_law_check,
    harmonic_compatibility,
    interior_integral,
    interior_integrals,
    interior_samples,
    p_function,
    serrin_deficit,
    verify_identities,
)
from .poisson2d import PoissonSolution2D, solve
from .radial import (
    PowerSourceBall,
    TorsionBall,
    ball_integral_identity,
    power_law_c_bound,
    power_source_ball,
    torsion_ball,
)
from .shape import RecoveryConfig, RecoveryTrace, deficit_landscape, recover
from .tolerances import Tolerances

__version__ = "0.1.0"

__all__ = [
    "BallDomain",
    "BallsymError",
    "BoundaryGrid",
    "BoundaryLaw",
    "BoundaryNode",
    "DegenerateParameterError",
    "GeneralLawResult",
    "IdentityReport",
    "IllConditionedBasisError",
    "InadmissibleBetaError",
    "InvalidDomainError",
    "LawEvaluationError",
    "ParameterRangeError",
    "PoissonSolution2D",
    "PowerSourceBall",
    "RecoveryConfig",
    "RecoveryStepError",
    "RecoveryTrace",
    "StarDomain2D",
    "Tolerances",
    "TorsionBall",
    "aux_h",
    "ball_integral_identity",
    "boundary_integral_rh",
    "compatibility_c",
    "deficit_landscape",
    "fd_laplacian",
    "general_law_check",
    "harmonic_compatibility",
    "interior_integral",
    "interior_integrals",
    "interior_samples",
    "p_function",
    "power_law_c_bound",
    "power_source_ball",
    "recover",
    "serrin_deficit",
    "solve",
    "torsion_ball",
    "verify_identities",
]

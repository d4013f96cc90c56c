"""High-temperature Casimir energies of a sphere facing a plate.

Exact series for the Dirichlet and Drude channels, the Neumann-Dirichlet
difference from bispherical block determinants, an independent
spherical-basis reference, and short-distance asymptotics.
"""
from ._backend import BACKEND
from .asymptotics import (
    SHORT_DISTANCE, beta, delta_phi_as, delta_phi_m_half, delta_phi_short,
    leading_correction, phi_dirichlet_short, phi_drude_short, phi_perfect_short,
)
from .bispherical import (
    TruncationPolicy, block_contribution, build_block, delta_phi_numeric,
    phi_neumann, phi_perfect, solve_delta_T, v_diagonal,
)
from .core import (
    Geometry, SeriesTolerance, delta_phi0, geometry_from_aspect_ratio,
    phi0_dirichlet, phi0_neumann, phi_dirichlet, phi_drude, phi_pfa,
)
from .errors import (
    CasimirError, ConvergenceError, DeterminantSignError, DomainError,
    NumericalError, SolverError, SpectralRadiusError,
)
from .report import EnergyReport, evaluate
from .specfun import ZETA3, log_factorial, polylog, polylog_exp, polylog_exp_diff
from .spherical import delta_phi_spherical, phi_spherical, spherical_matrix

__version__ = "0.1.0"

"""Sphere-plate geometry and the closed-form classical energies.

All energies are the dimensionless Phi entering F = -k_B T Phi.  The
bispherical parameter Z = exp(-mu1) satisfies cosh(mu1) = 1 + x, where
x = d/R is the aspect ratio.
"""
import math
from dataclasses import dataclass

from . import kernels
from .errors import ConvergenceError, DomainError
from .specfun import ZETA3

# below this x, mu1 comes from its Taylor series in x
_SMALL_X = 1e-8


@dataclass(frozen=True)
class Geometry:
    x: float
    Z: float
    mu1: float

    @property
    def one_minus_Z(self):
        return -math.expm1(-self.mu1)


@dataclass(frozen=True)
class SeriesTolerance:
    rel_tol: float = 1e-12
    max_terms: int = 10_000_000

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise DomainError("rel_tol must be positive")
        if self.max_terms < 1:
            raise DomainError("max_terms must be >= 1")


DEFAULT_TOL = SeriesTolerance()


def _check_x(x):
    x = float(x)
    if not x > 0 or math.isinf(x):
        raise DomainError(f"aspect ratio must be a positive finite number, got {x!r}")
    return x


def geometry_from_aspect_ratio(x) -> Geometry:
    """Bispherical parameters for aspect ratio ``x = d/R``.

    ``Z = 1 / (1 + x + sqrt(x (2 + x)))`` and ``mu1 = -ln Z``.
    """
    x = _check_x(x)
    if x < _SMALL_X:
        mu1 = math.sqrt(2.0 * x) * (1.0 - x / 12.0 + 3.0 * x * x / 160.0)
    else:
        mu1 = math.log1p(x + math.sqrt(x * (2.0 + x)))
    return Geometry(x=x, Z=math.exp(-mu1), mu1=mu1)


def _as_geometry(geom):
    if isinstance(geom, Geometry):
        return geom
    return geometry_from_aspect_ratio(geom)


def _log_series(geom, a0, weighted, tol, what):
    # sum over l of w_l * (-ln(1 - Z^(a0 + 2l)))
    total, n = kernels.neg_log1mexp_sum(geom.mu1, a0, 2.0, weighted, tol.rel_tol, tol.max_terms)
    if n < 0:
        raise ConvergenceError(f"{what}: no convergence within {tol.max_terms} terms",
                               partial=0.5 * total)
    return 0.5 * total


def phi_dirichlet(geom, tol=DEFAULT_TOL):
    """Exact Dirichlet energy  -1/2 sum_{l>=0} (2l+1) ln(1 - Z^(2l+1)).

    Parameters
    ----------
    geom : Geometry or float
        Geometry, or an aspect ratio to build one from.
    tol : SeriesTolerance
        Truncation happens once a rigorous bound on the remaining terms drops
        below ``rel_tol`` times the partial sum.
    """
    return _log_series(_as_geometry(geom), 1.0, True, tol, "phi_dirichlet")


def _drude_monopole_argument(geom, tol):
    # 1 - (1 - Z^2) sum_{l>=1} Z^(2l+1) (1 - Z^(2l)) / (1 - Z^(2l+1)), rewritten
    # as (1 - Z^3) + (1 - Z)(1 - Z^2) sum_{l>=1} Z^(4l+1) / (1 - Z^(2l+1))
    # so that no cancellation occurs as Z -> 1.
    mu = geom.mu1
    q = math.exp(-4.0 * mu)
    denom_min = -math.expm1(-3.0 * mu)
    terms = []
    for l in range(1, tol.max_terms + 1):
        terms.append(math.exp(-(4 * l + 1) * mu) / -math.expm1(-(2 * l + 1) * mu))
        tail = math.exp(-(4 * l + 5) * mu) / ((1.0 - q) * denom_min)
        if tail <= tol.rel_tol * terms[0]:
            break
    else:
        raise ConvergenceError("phi_drude: monopole series did not converge")
    s = math.fsum(terms)
    return -math.expm1(-3.0 * mu) + (-math.expm1(-mu)) * (-math.expm1(-2.0 * mu)) * s


def phi_drude(geom, tol=DEFAULT_TOL):
    """Exact Drude energy (Dirichlet with the sphere's monopole removed)."""
    geom = _as_geometry(geom)
    higher = _log_series(geom, 3.0, True, tol, "phi_drude")
    arg = _drude_monopole_argument(geom, tol)
    return higher - 0.5 * math.log(arg)


def phi0_dirichlet(geom, tol=DEFAULT_TOL):
    """m = 0 Dirichlet contribution  -1/2 sum_{l>=0} ln(1 - Z^(2l+1))."""
    return _log_series(_as_geometry(geom), 1.0, False, tol, "phi0_dirichlet")


def phi0_neumann(geom, tol=DEFAULT_TOL):
    """m = 0 Neumann contribution  -1/2 sum_{l>=0} ln(1 - Z^(2l+3))."""
    return _log_series(_as_geometry(geom), 3.0, False, tol, "phi0_neumann")


def delta_phi0(geom):
    """Phi0_N - Phi0_D = 1/2 ln(1 - Z), exact."""
    geom = _as_geometry(geom)
    return 0.5 * math.log(geom.one_minus_Z)


PFA_MODELS = ("D", "Dr", "N", "P")


def phi_pfa(model, x):
    """Proximity-force value zeta(3)/(8x), doubled for perfect conductors."""
    if model not in PFA_MODELS:
        raise DomainError(f"unknown model {model!r}; expected one of {PFA_MODELS}")
    x = _check_x(x)
    value = ZETA3 / (8.0 * x)
    return 2.0 * value if model == "P" else value

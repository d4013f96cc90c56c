"""Short-distance formulas for the sphere-plate energies.

Covers the per-m polylogarithm integrals for the Neumann-Dirichlet
difference, their sum over m, the Li_2 integral whose leading behaviour is
-ln^2(x)/16, the small-mu expansions of the exact D and Dr energies, and
the PFA deviation functions beta.
"""
import math
from dataclasses import dataclass

import numpy as np

from . import core
from ._parallel import ordered_terms
from .errors import DomainError
from .quadrature import DEFAULT_QUAD, QuadratureSpec, doubling_breakpoints, integrate
from .specfun import ZETA3, polylog_exp_diff

__all__ = [
    "ShortDistanceConstants", "SHORT_DISTANCE", "QuadratureSpec",
    "delta_phi_m_half", "delta_phi_short", "delta_phi_as", "leading_correction",
    "phi_dirichlet_short", "phi_drude_short", "phi_perfect_short", "beta",
]

_INV_2SQRTPI = 0.5 / math.sqrt(math.pi)


@dataclass(frozen=True)
class ShortDistanceConstants:
    gamma0p: float = 0.0874485
    gamma1: float = 1.270362
    gamma2: float = 1.35369


SHORT_DISTANCE = ShortDistanceConstants()


def _positive_x(x):
    return core.geometry_from_aspect_ratio(x).x


def delta_phi_m_half(m, x, q=DEFAULT_QUAD):
    """Short-distance estimate of the Neumann-minus-Dirichlet energy of mode m.

    Evaluates

        1/2 int_0^inf dl / sqrt(4 pi l)
            { Li_{3/2}[l/(l+1) e^(-2xl - m^2/l)] - Li_{3/2}[e^(-2xl - m^2/l)] }

    in the variable u = sqrt(l), which removes the endpoint singularity.
    The range is clipped where the damping exponent 2xl + m^2/l exceeds its
    minimum 2m sqrt(2x) by ``q.cutoff``.

    Parameters
    ----------
    m : int
        Azimuthal index, m >= 1.
    x : float
        Aspect ratio d/R.
    q : QuadratureSpec

    Returns
    -------
    float
        A strictly negative number.
    """
    if int(m) != m or m < 1:
        raise DomainError(f"delta_phi_m_half needs an integer m >= 1, got {m!r}")
    m = int(m)
    x = _positive_x(x)
    m2 = float(m * m)
    e_min = 2.0 * m * math.sqrt(2.0 * x)
    e_top = e_min + q.cutoff
    disc = math.sqrt(q.cutoff * (2.0 * e_min + q.cutoff))
    l_hi = (e_top + disc) / (4.0 * x)
    l_lo = m2 / (2.0 * x * l_hi)
    u_lo, u_hi = math.sqrt(l_lo), math.sqrt(l_hi)
    u_peak = (m2 / (2.0 * x)) ** 0.25

    def integrand(u):
        l = u * u
        return polylog_exp_diff(1.5, 2.0 * x * l + m2 / l, np.log1p(1.0 / l))

    left = list(np.linspace(u_lo, u_peak, 5))
    right = doubling_breakpoints(u_peak, (u_peak - u_lo) / 4.0, u_hi)
    return _INV_2SQRTPI * integrate(integrand, left[:-1] + right, q)


def delta_phi_short(x, q=DEFAULT_QUAD, tol=core.DEFAULT_TOL, jobs=1):
    """Small-distance estimate of Phi_N - Phi_D accurate to order x^0.

    The m = 0 part is exact, 1/2 ln(1 - Z); every m >= 1 contributes
    2 * delta_phi_m_half(m, x).  The m-sum stops after three consecutive
    terms each below ``tol.rel_tol`` times the running total.
    """
    geom = core.geometry_from_aspect_ratio(x)
    m0 = core.delta_phi0(geom)
    running = [m0]
    small = [0]

    def stop(m, value, kept):
        running[0] += value
        if abs(value) < tol.rel_tol * abs(running[0]):
            small[0] += 1
        else:
            small[0] = 0
        return small[0] >= 3

    terms, _ = ordered_terms(lambda m: 2.0 * delta_phi_m_half(m, geom.x, q), 1,
                             tol.max_terms, stop, jobs=jobs)
    return math.fsum([m0] + terms)


def delta_phi_as(x, q=DEFAULT_QUAD):
    """The m-integrated small-distance difference

        1/4 int_0^inf dl [Li_2(l/(l+1) e^(-2xl)) - Li_2(e^(-2xl))],

    whose leading behaviour as x -> 0 is -ln^2(x)/16.
    """
    x = _positive_x(x)
    l_hi = q.cutoff / (2.0 * x)
    l_min = min(1e-2, 0.1 * l_hi)

    def integrand(l):
        return polylog_exp_diff(2.0, 2.0 * x * l, np.log1p(1.0 / l))

    def integrand_log(t):
        l = np.exp(t)
        return integrand(l) * l

    head = integrate(integrand, [0.0, 0.5 * l_min, l_min], q)
    t0, t1 = math.log(l_min), math.log(l_hi)
    n = max(2, int(math.ceil(t1 - t0)))
    tail = integrate(integrand_log, np.linspace(t0, t1, n + 1), q)
    return 0.25 * (head + tail)


def leading_correction(x):
    """-ln^2(x)/16."""
    lx = math.log(_positive_x(x))
    return -lx * lx / 16.0


def phi_dirichlet_short(x, c=SHORT_DISTANCE):
    """Small-mu expansion of the Dirichlet energy through order mu^2."""
    mu = core.geometry_from_aspect_ratio(x).mu1
    return (ZETA3 / (4.0 * mu * mu) - math.log(mu) / 24.0 - 1.0 / 16.0 + c.gamma0p
            + 7.0 / 5760.0 * mu * mu)


def phi_drude_short(x, c=SHORT_DISTANCE):
    """Small-mu expansion of the Drude energy.

    Raises DomainError once ln(mu) >= gamma1, where the expansion's outer
    logarithm has no real value (x above roughly 16.6).
    """
    mu = core.geometry_from_aspect_ratio(x).mu1
    lm = math.log(mu)
    if not c.gamma1 - lm > 0:
        raise DomainError(
            f"Drude short-distance expansion undefined at x={x!r} (gamma1 - ln mu <= 0)")
    return (phi_dirichlet_short(x, c) - 0.5 * math.log(c.gamma1 - lm)
            - (lm - c.gamma2) / (lm - c.gamma1) * mu * mu / 12.0)


def phi_perfect_short(x):
    """Leading-order perfect-conductor energy zeta(3)/(4x) - ln^2(x)/16.

    Only the first two terms of the expansion; the o(ln x) remainder is not
    included, so expect a few-percent gap from the exact value at x ~ 1e-3.
    """
    x = _positive_x(x)
    return ZETA3 / (4.0 * x) + leading_correction(x)


BETA_MODELS = ("D", "Dr", "N", "P")


def beta_from_phi(model, x, phi):
    """Invert Phi = (zeta(3)/8)(1/x + beta), with zeta(3)/4 for model P."""
    if model not in BETA_MODELS:
        raise DomainError(f"unknown model {model!r}")
    x = _positive_x(x)
    scale = 4.0 if model == "P" else 8.0
    return scale * phi / ZETA3 - 1.0 / x


def beta(model, x, delta_phi, phi_exact_D, phi_exact_Dr):
    """Additive PFA deviation beta for model D, Dr, N or P.

    beta_D and beta_Dr invert their exact energies; beta_N adds
    8 delta_phi / zeta(3) to beta_D, and beta_P averages beta_Dr with beta_N.
    """
    if model not in BETA_MODELS:
        raise DomainError(f"unknown model {model!r}")
    if model == "Dr":
        return beta_from_phi("Dr", x, phi_exact_Dr)
    beta_d = beta_from_phi("D", x, phi_exact_D)
    if model == "D":
        return beta_d
    shift = 8.0 * delta_phi / ZETA3
    if model == "N":
        return beta_d + shift
    return 0.5 * (beta_from_phi("Dr", x, phi_exact_Dr) + beta_d + shift)

"""Sphere-plate energies in the spherical multipole basis.

A slow reference formulation: the round-trip matrix of block m has entries

    M^(D|m)_{ll'} = (l+l')! / ((l+m)! (l'-m)!) * (2(1+x))^-(l+l'+1),

the Neumann matrix carries an extra factor l/(l+1), and each block gives
-1/2 ln det(1 - M).  Multipoles up to l ~ 1/x are needed, so this module is
meant for x >= 0.05.
"""
import math
from dataclasses import dataclass

import numpy as np

from ._parallel import ordered_terms
from .errors import DomainError, NumericalError, SpectralRadiusError
from .specfun import log_factorial

__all__ = ["SphericalBlock", "spherical_matrix", "phi_block_spherical",
           "phi_spherical", "delta_phi_spherical", "MIN_SAFE_X"]

MIN_SAFE_X = 0.05
BOUNDARY_CONDITIONS = ("D", "N")
_LOG_MAX = math.log(np.finfo(float).max)


@dataclass(frozen=True)
class SphericalBlock:
    m: int
    bc: str
    l_max: int
    matrix: np.ndarray  # rows/columns l, l' = m .. l_max


def _check_x(x):
    x = float(x)
    if not x > 0 or math.isinf(x):
        raise DomainError(f"aspect ratio must be positive and finite, got {x!r}")
    return x


def spherical_matrix(bc, m, x, l_max):
    """Round-trip matrix of block ``m`` for boundary condition ``bc``.

    Entries are exponentiated from a log-factorial combination.  Raises
    NumericalError if any log-entry exceeds the double range.
    """
    if bc not in BOUNDARY_CONDITIONS:
        raise DomainError(f"bc must be 'D' or 'N', got {bc!r}")
    if int(m) != m or m < 0:
        raise DomainError(f"m must be a non-negative integer, got {m!r}")
    if int(l_max) != l_max or l_max < m:
        raise DomainError(f"l_max must be an integer >= m, got {l_max!r}")
    m, l_max = int(m), int(l_max)
    x = _check_x(x)
    l = np.arange(m, l_max + 1)
    s = l[:, None] + l[None, :]
    log_m = (log_factorial(s) - log_factorial(l + m)[:, None] - log_factorial(l - m)[None, :]
             - (s + 1) * math.log(2.0 * (1.0 + x)))
    if np.max(log_m) > _LOG_MAX:
        raise NumericalError(f"spherical matrix entry overflows at m={m}, l_max={l_max}, x={x!r}")
    mat = np.exp(log_m)
    if bc == "N":
        mat *= (l / (l + 1.0))[:, None]
    return SphericalBlock(m=m, bc=bc, l_max=l_max, matrix=mat)


def _power_estimate(mat, steps=50):
    v = np.ones(mat.shape[0])
    est = 0.0
    for _ in range(steps):
        w = mat @ v
        nrm = np.max(np.abs(w))
        if nrm == 0.0:
            return 0.0
        est = nrm / np.max(np.abs(v))
        v = w / nrm
    return est


def phi_block_spherical(block):
    """-1/2 ln det(1 - M) for one block.

    Requires a power-iteration estimate of the spectral radius below one and
    a positive LU determinant; otherwise raises SpectralRadiusError.
    """
    mat = block.matrix
    rho = _power_estimate(mat)
    if not rho < 1.0:
        raise SpectralRadiusError(f"spectral radius estimate {rho:.6g} >= 1 at m={block.m}")
    a = -mat
    a[np.diag_indices_from(a)] += 1.0
    sign, logdet = np.linalg.slogdet(a)
    if not sign > 0:
        raise SpectralRadiusError(f"det(1 - M) has sign {sign:+g} at m={block.m}")
    return -0.5 * float(logdet)


def _check_safe(x, allow_small_x):
    x = _check_x(x)
    if x < MIN_SAFE_X and not allow_small_x:
        raise DomainError(f"spherical basis restricted to x >= {MIN_SAFE_X} (got {x!r}); "
                          "pass allow_small_x=True to override")
    return x


def _m_sum(fn, l_max, rel_tol, jobs):
    first = fn(0)
    acc = [0.5 * first]
    quiet = [0]

    def stop(m, value, kept):
        acc[0] += value
        quiet[0] = quiet[0] + 1 if abs(value) <= rel_tol * abs(acc[0]) else 0
        return quiet[0] >= 3

    terms, _ = ordered_terms(fn, 1, l_max, stop, jobs=jobs)
    return 2.0 * math.fsum([0.5 * first] + terms)


def phi_spherical(bc, x, l_max, rel_tol=1e-14, jobs=1, allow_small_x=False):
    """2 sum'_m Phi_m for boundary condition ``bc`` at truncation ``l_max``."""
    x = _check_safe(x, allow_small_x)
    return _m_sum(lambda m: phi_block_spherical(spherical_matrix(bc, m, x, l_max)),
                  l_max, rel_tol, jobs)


def delta_phi_spherical(x, l_max, rel_tol=1e-14, jobs=1, allow_small_x=False):
    """Phi_N - Phi_D, summed block by block over m."""
    x = _check_safe(x, allow_small_x)

    def fn(m):
        return (phi_block_spherical(spherical_matrix("N", m, x, l_max))
                - phi_block_spherical(spherical_matrix("D", m, x, l_max)))

    return _m_sum(fn, l_max, rel_tol, jobs)

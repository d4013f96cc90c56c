"""Adaptive composite Gauss-Legendre quadrature for vectorised integrands."""
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ConvergenceError, DomainError


@dataclass(frozen=True)
class QuadratureSpec:
    """Settings shared by the short-distance integrals.

    order : Gauss-Legendre nodes per panel.
    cutoff : the integration range ends where the exponential damping
        factor has dropped by ``exp(-cutoff)`` from its maximum.
    abs_tol : absolute error target for the whole integral.
    max_depth : bisection depth at which a panel is declared stalled.
    """

    order: int = 32
    cutoff: float = 40.0
    abs_tol: float = 1e-11
    max_depth: int = 30

    def __post_init__(self):
        if self.order < 2:
            raise DomainError("panel order must be >= 2")
        if not self.cutoff > 0:
            raise DomainError("cutoff must be positive")
        if not self.abs_tol > 0:
            raise DomainError("abs_tol must be positive")


DEFAULT_QUAD = QuadratureSpec()


@lru_cache(maxsize=16)
def gauss_legendre(order):
    nodes, weights = np.polynomial.legendre.leggauss(order)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def _panel(f, a, b, nodes, weights):
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    return half * float(np.dot(weights, f(mid + half * nodes)))


def integrate(f, breakpoints, spec=DEFAULT_QUAD):
    """Integrate ``f`` over ``[breakpoints[0], breakpoints[-1]]``.

    Each interval between consecutive breakpoints is bisected until a panel
    and its two halves agree to the panel's share of ``spec.abs_tol``.
    ``f`` must accept and return 1-d float arrays.
    """
    nodes, weights = gauss_legendre(spec.order)
    bp = np.asarray(breakpoints, dtype=float)
    total_width = bp[-1] - bp[0]
    if not total_width > 0:
        return 0.0
    pieces = []
    stack = [(bp[i], bp[i + 1], _panel(f, bp[i], bp[i + 1], nodes, weights), 0)
             for i in range(len(bp) - 1) if bp[i + 1] > bp[i]]
    while stack:
        a, b, whole, depth = stack.pop()
        m = 0.5 * (a + b)
        left = _panel(f, a, m, nodes, weights)
        right = _panel(f, m, b, nodes, weights)
        allowed = spec.abs_tol * (b - a) / total_width
        if abs(left + right - whole) <= allowed:
            pieces.append(left + right)
        elif depth >= spec.max_depth:
            raise ConvergenceError(
                f"quadrature stalled on [{a:.6g}, {b:.6g}] at depth {depth}",
                partial=math.fsum(pieces))
        else:
            stack.append((a, m, left, depth + 1))
            stack.append((m, b, right, depth + 1))
    return math.fsum(pieces)


def doubling_breakpoints(start, first_width, stop):
    """Breakpoints ``start, start+h, start+3h, start+7h, ...`` capped at ``stop``."""
    pts = [start]
    h = first_width
    while pts[-1] + h < stop:
        pts.append(pts[-1] + h)
        h *= 2.0
    pts.append(stop)
    return pts

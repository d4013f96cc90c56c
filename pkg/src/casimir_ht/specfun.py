"""Special functions: Li_{3/2}, Li_2 on [0, 1), log-factorials and zeta(3)."""
import math
from enum import Enum

import numpy as np

from . import kernels
from .errors import DomainError

ZETA3 = 1.2020569031595942853997381615114499907649862923405


class PolylogOrder(float, Enum):
    """Supported polylogarithm orders."""

    THREE_HALVES = 1.5
    TWO = 2.0


def _order(s):
    try:
        return PolylogOrder(s)
    except ValueError:
        raise DomainError(f"unsupported polylogarithm order {s!r}; use 3/2 or 2") from None


def polylog(s, z):
    """Polylogarithm Li_s(z) = sum_{k>=1} z^k / k^s for real 0 <= z < 1.

    Parameters
    ----------
    s : PolylogOrder or float
        1.5 or 2.
    z : float or array_like
        Argument(s) in [0, 1).

    Returns
    -------
    float or ndarray
        Same shape as ``z``.

    Notes
    -----
    Evaluated through :func:`polylog_exp` with ``eps = -log z``.  When the
    argument is naturally available as an exponent, call
    :func:`polylog_exp` directly; it keeps full accuracy as z -> 1.
    """
    order = _order(s)
    z_arr = np.asarray(z, dtype=float)
    if np.any(~(z_arr >= 0.0)) or np.any(z_arr >= 1.0):
        raise DomainError("polylog requires 0 <= z < 1")
    small = z_arr <= _DIRECT_MAX
    with np.errstate(divide="ignore"):
        eps = -np.log(np.where(small, 0.5, z_arr))
    out = kernels.polylog_exp(eps, order.value)
    if np.any(small):
        out = np.where(small, _power_series(order.value, np.where(small, z_arr, 0.0)), out)
    return float(out) if out.ndim == 0 else out


# the power series keeps full relative accuracy for small z, where the
# exponent route loses |ln z| ulps
_DIRECT_MAX = 0.5
_DIRECT_TERMS = 60  # 0.5^60 / 60^1.5 < 1e-20


def _power_series(s, z):
    k = np.arange(_DIRECT_TERMS, 0, -1, dtype=float)
    acc = np.zeros_like(z)
    for kk in k:  # Horner in z
        acc = z * (acc + kk ** -s)
    return acc


def polylog_exp(s, eps):
    """Li_s(exp(-eps)) for ``eps >= 0`` (``eps = 0`` gives zeta(s))."""
    order = _order(s)
    e = np.asarray(eps, dtype=float)
    if np.any(~(e >= 0.0)):
        raise DomainError("polylog_exp requires eps >= 0")
    out = kernels.polylog_exp(np.where(np.isinf(e), 1e300, e), order.value)
    out = np.where(np.isinf(e), 0.0, out)
    return float(out) if out.ndim == 0 else out


# exact summation below the seam, Stirling series above
_LOGFACT_SEAM = 256
_LOGFACT_TABLE = np.array([math.fsum(math.log(k) for k in range(2, n + 1))
                           for n in range(_LOGFACT_SEAM + 1)])
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)


def _stirling_log_factorial(n):
    n = np.asarray(n, dtype=float)
    inv = 1.0 / n
    inv2 = inv * inv
    series = inv * (1.0 / 12 - inv2 * (1.0 / 360 - inv2 * (1.0 / 1260 - inv2 / 1680)))
    return (n + 0.5) * np.log(n) - n + _HALF_LOG_2PI + series


def log_factorial(n):
    """ln(n!) for non-negative integers (scalar or array)."""
    n_arr = np.asarray(n)
    if n_arr.dtype.kind not in "iu":
        if not np.all(np.mod(n_arr, 1) == 0):
            raise DomainError("log_factorial needs integer arguments")
        n_arr = n_arr.astype(np.int64)
    if np.any(n_arr < 0):
        raise DomainError("log_factorial needs n >= 0")
    small = n_arr <= _LOGFACT_SEAM
    out = np.empty(n_arr.shape, dtype=float)
    out[small] = _LOGFACT_TABLE[n_arr[small]]
    if not small.all():
        out[~small] = _stirling_log_factorial(n_arr[~small])
    return float(out) if out.ndim == 0 else out


def zeta3():
    return ZETA3


def polylog_exp_diff(s, eps, delta):
    """Li_s(exp(-eps - delta)) - Li_s(exp(-eps)) without cancellation.

    Both ``eps`` and ``delta`` must be non-negative; broadcasting applies.
    """
    order = _order(s)
    e = np.asarray(eps, dtype=float)
    d = np.asarray(delta, dtype=float)
    if np.any(~(e >= 0.0)) or np.any(~(d >= 0.0)):
        raise DomainError("polylog_exp_diff requires eps >= 0 and delta >= 0")
    out = kernels.polylog_exp_diff(e, d, order.value)
    return float(out) if out.ndim == 0 else out

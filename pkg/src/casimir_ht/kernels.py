"""Hot numeric kernels, each in a numba and a pure-numpy flavour.

The public names at the bottom of the module dispatch to whichever flavour
``_backend.BACKEND`` selected at import time.  Both flavours are always
importable as ``kernels.numba_impl`` / ``kernels.numpy_impl`` so that the
benchmark and the tests can compare them directly.
"""
import math
from types import SimpleNamespace

import numpy as np
from scipy.special import zeta as _hurwitz_zeta

from ._backend import BACKEND, HAVE_NUMBA, njit

# Li_s(exp(-eps)) switches from the defining series to the small-eps
# expansion below this eps.
EPS_SWITCH = 0.05
_N_TAYLOR = 16

_SQRT_PI = math.sqrt(math.pi)


def _taylor_coefficients(s):
    # c_k = zeta(s - k) (-1)^k / k!; the k = 1 pole for s = 2 is handled by
    # the logarithmic branch term, so its slot is zeroed.
    c = np.empty(_N_TAYLOR)
    for k in range(_N_TAYLOR):
        if s - k == 1.0:
            c[k] = 0.0
        else:
            c[k] = float(_hurwitz_zeta(s - k)) * (-1.0) ** k / math.factorial(k)
    return c


_COEF_3HALF = _taylor_coefficients(1.5)
_COEF_2 = _taylor_coefficients(2.0)


# ---------------------------------------------------------------------------
# polylogarithm Li_s(exp(-eps)) for s in {3/2, 2}
# ---------------------------------------------------------------------------

@njit
def _polylog_exp_scalar(eps, s, coef, integer_order):
    if eps < EPS_SWITCH:
        if integer_order:
            branch = 0.0 if eps == 0.0 else eps * (math.log(eps) - 1.0)
        else:
            branch = -2.0 * _SQRT_PI * math.sqrt(eps)
        acc = 0.0
        p = 1.0
        for k in range(_N_TAYLOR):
            acc += coef[k] * p
            p *= eps
        return branch + acc
    z = math.exp(-eps)
    tail_factor = 1.0 / (1.0 - z)
    zk = z
    acc = 0.0
    comp = 0.0
    k = 1
    while True:
        term = zk / k ** s
        y = term - comp
        t = acc + y
        comp = (t - acc) - y
        acc = t
        if term * tail_factor <= 1e-17 * acc:
            break
        k += 1
        zk *= z
    return acc


@njit
def _polylog_exp_nb(eps, s, coef, integer_order):
    out = np.empty(eps.size)
    flat = eps.ravel()
    for i in range(flat.size):
        out[i] = _polylog_exp_scalar(flat[i], s, coef, integer_order)
    return out.reshape(eps.shape)


def _polylog_exp_np(eps, s, coef, integer_order):
    eps = np.asarray(eps, dtype=float)
    out = np.empty_like(eps)
    small = eps < EPS_SWITCH
    if small.any():
        e = eps[small]
        if integer_order:
            with np.errstate(divide="ignore", invalid="ignore"):
                branch = np.where(e == 0.0, 0.0, e * (np.log(e) - 1.0))
        else:
            branch = -2.0 * _SQRT_PI * np.sqrt(e)
        out[small] = branch + np.polynomial.polynomial.polyval(e, coef)
    big = ~small
    if big.any():
        e = eps[big]
        z = np.exp(-e)
        tail_factor = 1.0 / (1.0 - z)
        acc = np.zeros_like(e)
        comp = np.zeros_like(e)
        zk = z.copy()
        active = np.ones(e.shape, dtype=bool)
        k = 1
        while active.any():
            term = np.where(active, zk / k ** s, 0.0)
            y = term - comp
            t = acc + y
            comp = (t - acc) - y
            acc = t
            active &= ~(term * tail_factor <= 1e-17 * acc)
            k += 1
            zk *= z
        out[big] = acc
    return out


# ---------------------------------------------------------------------------
# differences Li_s(exp(-eps - delta)) - Li_s(exp(-eps)), delta >= 0, free of
# the cancellation a plain subtraction suffers when delta << eps
# ---------------------------------------------------------------------------

# the small-eps expansion stays accurate to ~1e-18 up to this eps
_EXPANSION_MAX = 0.5


@njit
def _polylog_exp_diff_scalar(eps, delta, s, coef, integer_order):
    if delta == 0.0:
        return 0.0
    e1 = eps + delta
    if eps >= EPS_SWITCH:
        z = math.exp(-eps)
        tail_factor = 1.0 / (1.0 - z)
        zk = z
        acc = 0.0
        comp = 0.0
        k = 1
        while True:
            mag = zk / k ** s
            term = mag * math.expm1(-k * delta)
            y = term - comp
            t = acc + y
            comp = (t - acc) - y
            acc = t
            if mag * tail_factor <= 1e-17 * abs(acc):
                break
            k += 1
            zk *= z
        return acc
    if e1 >= _EXPANSION_MAX:
        return (_polylog_exp_scalar(e1, s, coef, integer_order)
                - _polylog_exp_scalar(eps, s, coef, integer_order))
    if integer_order:
        if eps == 0.0:
            branch = 0.0 if e1 == 0.0 else e1 * (math.log(e1) - 1.0)
        else:
            branch = delta * math.log(e1) + eps * math.log1p(delta / eps) - delta
    else:
        branch = -2.0 * _SQRT_PI * delta / (math.sqrt(e1) + math.sqrt(eps))
    # e1^k - eps^k = delta * h_k,  h_1 = 1,  h_{k+1} = e1 h_k + eps^k
    acc = 0.0
    h = 1.0
    p0 = eps
    for k in range(1, _N_TAYLOR):
        acc += coef[k] * h
        h = e1 * h + p0
        p0 *= eps
    return branch + delta * acc


@njit
def _polylog_exp_diff_nb(eps, delta, s, coef, integer_order):
    out = np.empty(eps.size)
    for i in range(eps.size):
        out[i] = _polylog_exp_diff_scalar(eps[i], delta[i], s, coef, integer_order)
    return out


def _polylog_exp_diff_np(eps, delta, s, coef, integer_order):
    eps = np.asarray(eps, dtype=float)
    delta = np.asarray(delta, dtype=float)
    e1 = eps + delta
    out = np.empty_like(eps)

    out[delta == 0.0] = 0.0
    series = (eps >= EPS_SWITCH) & (delta != 0.0)
    if series.any():
        e = eps[series]
        d = delta[series]
        z = np.exp(-e)
        tail_factor = 1.0 / (1.0 - z)
        acc = np.zeros_like(e)
        comp = np.zeros_like(e)
        zk = z.copy()
        active = np.ones(e.shape, dtype=bool)
        k = 1
        while active.any():
            mag = np.where(active, zk / k ** s, 0.0)
            term = mag * np.expm1(-k * d)
            y = term - comp
            t = acc + y
            comp = (t - acc) - y
            acc = t
            active &= ~(mag * tail_factor <= 1e-17 * np.abs(acc))
            k += 1
            zk *= z
        out[series] = acc

    rest = (eps < EPS_SWITCH) & (delta != 0.0)
    direct = rest & (e1 >= _EXPANSION_MAX)
    if direct.any():
        out[direct] = (_polylog_exp_np(e1[direct], s, coef, integer_order)
                       - _polylog_exp_np(eps[direct], s, coef, integer_order))

    expand = rest & ~direct
    if expand.any():
        e = eps[expand]
        d = delta[expand]
        f = e1[expand]
        with np.errstate(divide="ignore", invalid="ignore"):
            if integer_order:
                branch = np.where(
                    e == 0.0,
                    np.where(f == 0.0, 0.0, f * (np.log(f) - 1.0)),
                    d * np.log(f) + e * np.log1p(d / e) - d)
            else:
                branch = -2.0 * _SQRT_PI * d / (np.sqrt(f) + np.sqrt(e))
        acc = np.zeros_like(e)
        h = np.ones_like(e)
        p0 = e.copy()
        for k in range(1, _N_TAYLOR):
            acc += coef[k] * h
            h = f * h + p0
            p0 = p0 * e
        out[expand] = branch + d * acc
    return out


# ---------------------------------------------------------------------------
# sums  sum_k w_k * (-log(1 - exp(-a_k mu))),  a_k = a0 + step*k
# ---------------------------------------------------------------------------

@njit
def _log1mexp_scalar(a):
    # log(1 - exp(-a)) for a > 0
    if a < 0.6931471805599453:
        return math.log(-math.expm1(-a))
    return math.log1p(-math.exp(-a))


@njit
def _neg_log1mexp_sum_nb(mu, a0, step, weighted, rel_tol, max_terms):
    q = math.exp(-step * mu)
    acc = 0.0
    comp = 0.0
    for k in range(max_terms):
        a = a0 + step * k
        w = a if weighted else 1.0
        term = -w * _log1mexp_scalar(a * mu)
        y = term - comp
        t = acc + y
        comp = (t - acc) - y
        acc = t
        # rigorous bound on the remaining terms j > k
        an = a + step
        yn = math.exp(-an * mu)
        if weighted:
            geo = yn * (an + step * q / (1.0 - q)) / (1.0 - q)
        else:
            geo = yn / (1.0 - q)
        if geo / (1.0 - yn) <= rel_tol * abs(acc):
            return acc, k + 1
    return acc, -1


def _neg_log1mexp_sum_np(mu, a0, step, weighted, rel_tol, max_terms, chunk=4096):
    q = math.exp(-step * mu)
    parts = []
    start = 0
    while start < max_terms:
        k = np.arange(start, min(start + chunk, max_terms), dtype=float)
        a = a0 + step * k
        am = a * mu
        lg = np.where(am < math.log(2.0), np.log(-np.expm1(-am)), np.log1p(-np.exp(-am)))
        terms = -(a if weighted else 1.0) * lg
        an = a + step
        yn = np.exp(-an * mu)
        if weighted:
            geo = yn * (an + step * q / (1.0 - q)) / (1.0 - q)
        else:
            geo = yn / (1.0 - q)
        bound = geo / (1.0 - yn)
        # running sums only need to be accurate enough to place the cut
        running = math.fsum(parts) + np.cumsum(terms)
        hit = np.nonzero(bound <= rel_tol * np.abs(running))[0]
        if hit.size:
            j = hit[0]
            parts.extend(terms[: j + 1].tolist())
            return math.fsum(parts), int(start + j + 1)
        parts.extend(terms.tolist())
        start += chunk
    return math.fsum(parts), -1


# ---------------------------------------------------------------------------
# tridiagonal solve against every unit column: B X = scale * I
# ---------------------------------------------------------------------------

@njit
def _tridiag_identity_solve_nb(diag, sub, sup, scale):
    n = diag.size
    cp = np.empty(n)
    denom = np.empty(n)
    denom[0] = diag[0]
    for i in range(1, n):
        cp[i - 1] = sup[i - 1] / denom[i - 1]
        denom[i] = diag[i] - sub[i - 1] * cp[i - 1]
    x = np.zeros((n, n))
    # forward sweep; the transformed right-hand side is lower triangular
    for i in range(n):
        inv = 1.0 / denom[i]
        if i > 0:
            f = sub[i - 1]
            for j in range(i):
                x[i, j] = -f * x[i - 1, j] * inv
        x[i, i] = scale * inv
    # back substitution
    for i in range(n - 2, -1, -1):
        c = cp[i]
        for j in range(n):
            x[i, j] -= c * x[i + 1, j]
    return x


def _tridiag_identity_solve_np(diag, sub, sup, scale):
    n = diag.size
    cp = np.empty(n)
    denom = np.empty(n)
    denom[0] = diag[0]
    for i in range(1, n):
        cp[i - 1] = sup[i - 1] / denom[i - 1]
        denom[i] = diag[i] - sub[i - 1] * cp[i - 1]
    x = np.zeros((n, n))
    x[0, 0] = scale / denom[0]
    for i in range(1, n):
        x[i, :i] = -sub[i - 1] * x[i - 1, :i] / denom[i]
        x[i, i] = scale / denom[i]
    for i in range(n - 2, -1, -1):
        x[i] -= cp[i] * x[i + 1]
    return x


# ---------------------------------------------------------------------------
# log-determinant of every bispherical block m = 1..L via continuants
# ---------------------------------------------------------------------------
#
# Block m has rows l = m..L, diagonal d_l and off-diagonal product
# sub(l) * sup(l - 1) = (l - m)(l + m).  Pivots obey
# f_l = d_l - (l - m)(l + m) / f_{l-1},  f_m = d_m.

@njit
def _continuant_blocks_nb(diag_a, diag_b, L):
    # returns sum_l log f_l for every m = 0..L, for both diagonals
    out_a = np.zeros(L + 1)
    out_b = np.zeros(L + 1)
    for m in range(L + 1):
        fa = diag_a[m]
        fb = diag_b[m]
        sa = math.log(fa)
        sb = math.log(fb)
        for l in range(m + 1, L + 1):
            p = float((l - m) * (l + m))
            fa = diag_a[l] - p / fa
            fb = diag_b[l] - p / fb
            sa += math.log(fa)
            sb += math.log(fb)
        out_a[m] = sa
        out_b[m] = sb
    return out_a, out_b


def _continuant_blocks_np(diag_a, diag_b, L):
    m = np.arange(L + 1)
    fa = diag_a.copy()
    fb = diag_b.copy()
    sa = np.log(fa)
    sb = np.log(fb)
    # after processing row l, fa[m] holds the pivot of block m at row l
    for l in range(1, L + 1):
        mm = m[:l]
        p = (l - mm) * (l + mm).astype(float)
        fa[:l] = diag_a[l] - p / fa[:l]
        fb[:l] = diag_b[l] - p / fb[:l]
        sa[:l] += np.log(fa[:l])
        sb[:l] += np.log(fb[:l])
    return sa, sb


# ---------------------------------------------------------------------------

numba_impl = SimpleNamespace(
    polylog_exp=_polylog_exp_nb,
    polylog_exp_diff=_polylog_exp_diff_nb,
    neg_log1mexp_sum=_neg_log1mexp_sum_nb,
    tridiag_identity_solve=_tridiag_identity_solve_nb,
    continuant_blocks=_continuant_blocks_nb,
) if HAVE_NUMBA else None

numpy_impl = SimpleNamespace(
    polylog_exp=_polylog_exp_np,
    polylog_exp_diff=_polylog_exp_diff_np,
    neg_log1mexp_sum=_neg_log1mexp_sum_np,
    tridiag_identity_solve=_tridiag_identity_solve_np,
    continuant_blocks=_continuant_blocks_np,
)

_impl = numba_impl if BACKEND == "numba" else numpy_impl


def polylog_exp(eps, s):
    """Li_s(exp(-eps)) elementwise for ``eps >= 0`` and s in {1.5, 2}."""
    eps = np.asarray(eps, dtype=float)
    flat = np.ascontiguousarray(eps.ravel())
    if s == 1.5:
        out = _impl.polylog_exp(flat, 1.5, _COEF_3HALF, False)
    else:
        out = _impl.polylog_exp(flat, 2.0, _COEF_2, True)
    return out.reshape(eps.shape)


def polylog_exp_diff(eps, delta, s):
    """Li_s(exp(-eps - delta)) - Li_s(exp(-eps)) elementwise, eps, delta >= 0."""
    eps, delta = np.broadcast_arrays(np.asarray(eps, dtype=float),
                                     np.asarray(delta, dtype=float))
    shape = eps.shape
    e = np.ascontiguousarray(eps.ravel())
    d = np.ascontiguousarray(delta.ravel())
    if s == 1.5:
        out = _impl.polylog_exp_diff(e, d, 1.5, _COEF_3HALF, False)
    else:
        out = _impl.polylog_exp_diff(e, d, 2.0, _COEF_2, True)
    return out.reshape(shape)


def neg_log1mexp_sum(mu, a0, step, weighted, rel_tol, max_terms):
    return _impl.neg_log1mexp_sum(float(mu), float(a0), float(step), bool(weighted),
                                  float(rel_tol), int(max_terms))


def tridiag_identity_solve(diag, sub, sup, scale):
    return _impl.tridiag_identity_solve(np.ascontiguousarray(diag, dtype=float),
                                        np.ascontiguousarray(sub, dtype=float),
                                        np.ascontiguousarray(sup, dtype=float),
                                        float(scale))


def continuant_blocks(diag_a, diag_b, L):
    return _impl.continuant_blocks(np.ascontiguousarray(diag_a, dtype=float),
                                   np.ascontiguousarray(diag_b, dtype=float), int(L))

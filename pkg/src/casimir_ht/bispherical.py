"""Neumann-minus-Dirichlet energy in the bispherical multipole basis.

For each azimuthal index m the sphere's Neumann T-matrix (minus identity)
solves a tridiagonal system B^(m) dT = -2 sinh(mu1) 1, and the block
contributes c_m = -ln det(1 + V dT) with V_ll = 1/(1 - exp(mu1 (2l+1))).
The energy difference is delta_phi = c_0/2 + sum_{m>=1} c_m.
"""
import math
from dataclasses import dataclass, field

import numpy as np

from . import core, kernels
from ._parallel import ordered_terms
from .errors import ConvergenceError, DeterminantSignError, DomainError, SolverError

__all__ = [
    "TridiagonalBlock", "BlockResult", "TruncationPolicy", "ConvergenceReport",
    "build_block", "solve_delta_T", "v_diagonal", "block_contribution",
    "delta_phi_numeric", "buffer_sensitivity", "required_l_max",
    "phi_neumann", "phi_perfect",
]

RESIDUAL_TOL = 1e-10
METHODS = ("dense", "continuant")


@dataclass(frozen=True)
class TridiagonalBlock:
    """B^(m) restricted to rows and columns l = m .. m + size - 1.

    ``sub[i]`` couples row m+i+1 to column m+i, ``sup[i]`` couples row m+i
    to column m+i+1.
    """

    m: int
    size: int
    diag: np.ndarray
    sub: np.ndarray
    sup: np.ndarray

    @property
    def l_max(self):
        return self.m + self.size - 1

    @property
    def l_values(self):
        return np.arange(self.m, self.m + self.size)

    def dense(self):
        return np.diag(self.diag) + np.diag(self.sub, -1) + np.diag(self.sup, 1)

    def dominance_margin(self):
        """min over rows of |diag| - |sub| - |sup|."""
        off = np.zeros(self.size)
        off[1:] += np.abs(self.sub)
        off[:-1] += np.abs(self.sup)
        return float(np.min(np.abs(self.diag) - off))


@dataclass(frozen=True)
class BlockResult:
    m: int
    contribution: float
    l_max_used: int
    logdet_sign: float
    solver_residual: float

    @property
    def weighted(self):
        """Contribution with the half weight of m = 0 applied."""
        return 0.5 * self.contribution if self.m == 0 else self.contribution


@dataclass(frozen=True)
class TruncationPolicy:
    """Controls for the adaptive truncation ladder.

    The ladder starts at ``ceil(initial_scale / mu1)`` and adds
    ``ceil(step_scale / mu1)`` multipoles per rung.  Truncation errors decay
    like exp(-2 mu1 l_max), so successive differences shrink by a roughly
    constant factor and a geometric (Aitken) extrapolation of the last three
    rungs is used once available.  The m-sum stops after ``m_patience``
    consecutive blocks whose geometric tail estimate is below
    ``m_tail_fraction * rel_tol`` of the running sum.
    """

    rel_tol: float = 1e-9
    initial_scale: float = 4.0
    step_scale: float = 0.5
    l_max_cap: int = 4000
    m_cap: int = 100_000
    max_rungs: int = 40
    m_patience: int = 3
    m_tail_fraction: float = 0.01
    method: str = "dense"
    jobs: int = 1

    def __post_init__(self):
        for name in ("rel_tol", "initial_scale", "step_scale", "l_max_cap", "m_cap",
                     "max_rungs", "m_patience", "m_tail_fraction", "jobs"):
            if not getattr(self, name) > 0:
                raise DomainError(f"TruncationPolicy.{name} must be positive")
        if self.method not in METHODS:
            raise DomainError(f"method must be one of {METHODS}, got {self.method!r}")

    def l_max_start(self, geom):
        return max(1, math.ceil(self.initial_scale / geom.mu1))

    def l_max_step(self, geom):
        return max(1, math.ceil(self.step_scale / geom.mu1))


DEFAULT_POLICY = TruncationPolicy()


@dataclass
class ConvergenceReport:
    x: float
    method: str
    l_max_used: int = 0
    m_max_used: int = 0
    history: list = field(default_factory=list)  # (l_max, raw value) per rung
    extrapolated: bool = False
    error_estimate: float = math.nan
    converged: bool = False
    forced: bool = False


def _geom(x):
    return x if isinstance(x, core.Geometry) else core.geometry_from_aspect_ratio(x)


def v_diagonal(geom, l):
    """V_ll = 1 / (1 - exp(mu1 (2l + 1))), strictly negative and -> 0 as l grows."""
    geom = _geom(geom)
    l_arr = np.asarray(l)
    if np.any(l_arr < 0):
        raise DomainError("v_diagonal needs l >= 0")
    out = -1.0 / np.expm1(geom.mu1 * (2.0 * l_arr + 1.0))
    return float(out) if out.ndim == 0 else out


def _check_m_lmax(m, l_max):
    if int(m) != m or m < 0:
        raise DomainError(f"m must be a non-negative integer, got {m!r}")
    if int(l_max) != l_max or l_max < m:
        raise DomainError(f"l_max must be an integer >= m (m={m}, l_max={l_max!r})")
    return int(m), int(l_max)


def _diagonals(geom, l_max):
    l = np.arange(l_max + 1, dtype=float)
    d = (2.0 * l + 1.0) * math.cosh(geom.mu1) + math.sinh(geom.mu1)
    return d, d - 2.0 * math.sinh(geom.mu1) * v_diagonal(geom, l)


def build_block(m, geom, l_max):
    """Tridiagonal B^(m) on rows l = m .. l_max (a 1x1 block when l_max == m)."""
    m, l_max = _check_m_lmax(m, l_max)
    geom = _geom(geom)
    l = np.arange(m, l_max + 1, dtype=float)
    diag = (2.0 * l + 1.0) * math.cosh(geom.mu1) + math.sinh(geom.mu1)
    sub = -(l[1:] - m)
    sup = -(l[:-1] + 1.0 + m)
    return TridiagonalBlock(m=m, size=l.size, diag=diag, sub=sub, sup=sup)


def _residual(block, dT, scale):
    r = block.diag[:, None] * dT
    r[1:] += block.sub[:, None] * dT[:-1]
    r[:-1] += block.sup[:, None] * dT[1:]
    r[np.diag_indices_from(r)] -= scale
    return float(np.max(np.abs(r))) / abs(scale)


def _solve(block, geom):
    scale = -2.0 * math.sinh(geom.mu1)
    dT = kernels.tridiag_identity_solve(block.diag, block.sub, block.sup, scale)
    res = _residual(block, dT, scale)
    if not res < RESIDUAL_TOL:
        raise SolverError(f"tridiagonal sweep residual {res:.3e} at m={block.m}, "
                          f"size={block.size}")
    return dT, res


def solve_delta_T(block, geom):
    """dT = -2 sinh(mu1) B^-1, one tridiagonal sweep per unit column.

    No pivoting: B is strictly diagonally dominant.  Raises SolverError when
    the max-norm residual relative to 2 sinh(mu1) is not below 1e-10.
    """
    return _solve(block, _geom(geom))[0]


def block_contribution(m, geom, l_max, buffer=1.0):
    """c_m = -ln det(1 + V dT) for one azimuthal block.

    ``buffer > 1`` solves for dT on ``ceil(buffer * l_max)`` rows and keeps
    the leading l_max - m + 1 rows and columns for the determinant.
    """
    geom = _geom(geom)
    m, l_max = _check_m_lmax(m, l_max)
    if not buffer >= 1.0:
        raise DomainError("buffer must be >= 1")
    solve_l_max = max(l_max, math.ceil(buffer * l_max))
    block = build_block(m, geom, solve_l_max)
    dT, res = _solve(block, geom)
    n = l_max - m + 1
    a = v_diagonal(geom, np.arange(m, l_max + 1))[:, None] * dT[:n, :n]
    a[np.diag_indices_from(a)] += 1.0
    sign, logdet = np.linalg.slogdet(a)
    if not sign > 0:
        raise DeterminantSignError(
            f"det(1 + V dT) has sign {sign:+g} at m={m}, l_max={l_max}, x={geom.x!r}")
    return BlockResult(m=m, contribution=-float(logdet), l_max_used=l_max,
                       logdet_sign=float(sign), solver_residual=res)


def _continuant_contributions(geom, l_max):
    # det(1 + V dT) = det(B - 2 sinh(mu1) V) / det(B), both tridiagonal
    da, db = _diagonals(geom, l_max)
    la, lb = kernels.continuant_blocks(da, db, l_max)
    return la - lb


class _MStop:
    """Tail-estimate stopping rule for the ascending m-sum."""

    def __init__(self, policy, start):
        self.policy = policy
        self.acc = start
        self.prev = None
        self.quiet = 0

    def __call__(self, m, value, kept):
        self.acc += value
        if self.prev is not None and self.prev != 0.0:
            r = abs(value / self.prev)
            tail = abs(value) * r / (1.0 - r) if r < 1.0 else math.inf
        else:
            tail = math.inf if value != 0.0 else 0.0
        self.prev = value
        limit = self.policy.m_tail_fraction * self.policy.rel_tol * abs(self.acc)
        self.quiet = self.quiet + 1 if tail < limit else 0
        return self.quiet >= self.policy.m_patience


def _delta_phi_at(geom, l_max, policy, exact_m0, buffer=1.0):
    """(value, m_max) at fixed truncation; m runs from 1 up to l_max."""
    if exact_m0:
        m0 = core.delta_phi0(geom)
    else:
        m0 = block_contribution(0, geom, l_max, buffer).weighted
    last = min(l_max, policy.m_cap)
    if policy.method == "continuant" and buffer == 1.0:
        c = _continuant_contributions(geom, l_max)
        fn = c.__getitem__
        jobs = 1
    else:
        def fn(m):
            return block_contribution(m, geom, l_max, buffer).contribution
        jobs = policy.jobs
    if last < 1:
        return m0, 0
    terms, _ = ordered_terms(fn, 1, last, _MStop(policy, m0), jobs=jobs)
    return math.fsum([m0] + [float(t) for t in terms]), len(terms)


def _extrapolate(values):
    """Geometric extrapolation of the last three values, or None."""
    if len(values) < 3:
        return None
    d1 = values[-2] - values[-3]
    d2 = values[-1] - values[-2]
    if d1 == 0.0:
        return values[-1]
    r = d2 / d1
    if not 0.0 < r < 1.0:
        return None
    return values[-1] + d2 * r / (1.0 - r)


def delta_phi_numeric(x, policy=DEFAULT_POLICY, l_max=None, exact_m0=True):
    """Phi_N - Phi_D from the bispherical block determinants.

    Parameters
    ----------
    x : float
        Aspect ratio d/R.
    policy : TruncationPolicy
    l_max : int, optional
        Fixed truncation.  Disables the ladder; blocks m = 1 .. l_max are
        summed (the last one is 1x1) subject to the m-stop rule.
    exact_m0 : bool
        Use the closed form 1/2 ln(1 - Z) for m = 0 instead of its block.

    Returns
    -------
    value : float
    report : ConvergenceReport

    Raises
    ------
    ConvergenceError
        When the ladder reaches ``policy.l_max_cap`` or ``policy.max_rungs``
        without meeting ``policy.rel_tol``; ``partial`` holds (value, report).
    """
    geom = _geom(x)
    report = ConvergenceReport(x=geom.x, method=policy.method)
    if l_max is not None:
        _check_m_lmax(0, l_max)
        value, m_used = _delta_phi_at(geom, int(l_max), policy, exact_m0)
        report.history.append((int(l_max), value))
        report.l_max_used, report.m_max_used = int(l_max), m_used
        report.forced = True
        return value, report

    tol = policy.rel_tol
    L = policy.l_max_start(geom)
    step = policy.l_max_step(geom)
    raw, ext = [], []
    for _ in range(policy.max_rungs):
        if L > policy.l_max_cap:
            break
        value, m_used = _delta_phi_at(geom, L, policy, exact_m0)
        raw.append(value)
        report.history.append((L, value))
        report.l_max_used, report.m_max_used = L, m_used
        if len(raw) >= 2:
            d = abs(raw[-1] - raw[-2])
            if d <= 1e-13 * abs(value) or d <= tol * abs(value) * 1e-2:
                report.error_estimate = d
                report.converged = True
                return value, report
        e = _extrapolate(raw)
        ext.append(e)
        if e is not None and len(ext) >= 2 and ext[-2] is not None:
            err = abs(e - ext[-2])
            if err <= tol * abs(e):
                report.extrapolated = True
                report.error_estimate = err
                report.converged = True
                return e, report
        L += step
    best = raw[-1] if raw else math.nan
    raise ConvergenceError(
        f"delta_phi_numeric: rel_tol {tol:g} not reached at x={geom.x!r} "
        f"(last l_max={report.l_max_used}, cap {policy.l_max_cap})",
        partial=(best, report))


def buffer_sensitivity(x, l_max, buffer=1.25, policy=DEFAULT_POLICY):
    """Change in delta_phi when dT is solved on a ``buffer``-larger basis.

    The determinant is still truncated at ``l_max``.  Returns
    (value, buffered_value).
    """
    geom = _geom(x)
    plain, _ = _delta_phi_at(geom, int(l_max), policy, exact_m0=False)
    wide, _ = _delta_phi_at(geom, int(l_max), policy, exact_m0=False, buffer=buffer)
    return plain, wide


def required_l_max(x, rel_tol=1e-6, policy=None, reference=None, ref_scale=16.0):
    """Smallest fixed l_max whose delta_phi lies within ``rel_tol`` of a reference.

    The reference defaults to a fixed-truncation value at
    ``ceil(ref_scale / mu1)``.  Truncation errors decrease monotonically
    beyond a few multipoles, so a bisection on l_max is used.
    """
    geom = _geom(x)
    policy = policy or TruncationPolicy(method="continuant")

    def at(L):
        return delta_phi_numeric(geom, policy, l_max=L)[0]

    if reference is None:
        reference = at(math.ceil(ref_scale / geom.mu1))
    ok = lambda L: abs(at(L) - reference) <= rel_tol * abs(reference)
    hi = max(2, math.ceil(2.0 / geom.mu1))
    while not ok(hi):
        hi *= 2
        if hi > policy.l_max_cap:
            raise ConvergenceError("required_l_max: cap reached", partial=hi)
    lo = 1
    while lo < hi:
        mid = (lo + hi) // 2
        if ok(mid):
            hi = mid
        else:
            lo = mid + 1
    return lo


def phi_neumann(x, policy=DEFAULT_POLICY, tol=core.DEFAULT_TOL):
    """Phi_N = Phi_D + delta_phi."""
    geom = _geom(x)
    return core.phi_dirichlet(geom, tol) + delta_phi_numeric(geom, policy)[0]


def phi_perfect(x, policy=DEFAULT_POLICY, grounded=False, tol=core.DEFAULT_TOL):
    """Perfect-conductor energy: Phi_Dr + Phi_D + delta_phi, or 2 Phi_D + delta_phi
    for a grounded sphere."""
    geom = _geom(x)
    first = core.phi_dirichlet(geom, tol) if grounded else core.phi_drude(geom, tol)
    return first + phi_neumann(geom, policy, tol)

"""Assemble every channel at one aspect ratio into a flat record."""
import math
import time
from dataclasses import asdict, dataclass, field

from . import asymptotics, bispherical, core

__all__ = ["EnergyReport", "CSV_COLUMNS", "evaluate"]

CSV_COLUMNS = (
    "x", "Z", "mu1", "phi_D", "phi_Dr", "phi_N", "phi_P", "phi_P_grounded",
    "delta_phi", "delta_phi_short", "leading_correction",
    "beta_D", "beta_Dr", "beta_N", "beta_P", "l_max_used", "m_max_used",
)

EXACT, NUMERIC, ASYMPTOTIC = "exact-series", "bispherical", "asymptotic"


@dataclass
class EnergyReport:
    x: float
    Z: float
    mu1: float
    phi_D: float
    phi_Dr: float
    phi_N: float
    phi_P: float
    phi_P_grounded: float
    delta_phi: float
    delta_phi_short: float
    leading_correction: float
    beta_D: float
    beta_Dr: float
    beta_N: float
    beta_P: float
    l_max_used: int
    m_max_used: int
    rel_tol: float
    wall_time_ms: float
    methods: dict = field(default_factory=dict)

    def as_dict(self):
        return asdict(self)

    def csv_row(self):
        return [getattr(self, c) for c in CSV_COLUMNS]


def evaluate(x, policy=bispherical.DEFAULT_POLICY, short=True):
    """Every energy channel at ``x``; ``short=False`` skips delta_phi_short."""
    t0 = time.perf_counter()
    geom = core.geometry_from_aspect_ratio(x)
    phi_d = core.phi_dirichlet(geom)
    phi_dr = core.phi_drude(geom)
    dphi, conv = bispherical.delta_phi_numeric(geom, policy)
    dshort = asymptotics.delta_phi_short(geom.x, jobs=policy.jobs) if short else math.nan
    beta = {m: asymptotics.beta(m, geom.x, dphi, phi_d, phi_dr) for m in asymptotics.BETA_MODELS}
    methods = {
        "phi_D": EXACT, "phi_Dr": EXACT, "phi_N": NUMERIC, "phi_P": NUMERIC,
        "phi_P_grounded": NUMERIC, "delta_phi": NUMERIC, "delta_phi_short": ASYMPTOTIC,
        "leading_correction": ASYMPTOTIC, "beta_D": EXACT, "beta_Dr": EXACT,
        "beta_N": NUMERIC, "beta_P": NUMERIC,
    }
    return EnergyReport(
        x=geom.x, Z=geom.Z, mu1=geom.mu1,
        phi_D=phi_d, phi_Dr=phi_dr, phi_N=phi_d + dphi,
        phi_P=phi_dr + phi_d + dphi, phi_P_grounded=2.0 * phi_d + dphi,
        delta_phi=dphi, delta_phi_short=dshort,
        leading_correction=asymptotics.leading_correction(geom.x),
        beta_D=beta["D"], beta_Dr=beta["Dr"], beta_N=beta["N"], beta_P=beta["P"],
        l_max_used=conv.l_max_used, m_max_used=conv.m_max_used, rel_tol=policy.rel_tol,
        wall_time_ms=1e3 * (time.perf_counter() - t0), methods=methods,
    )

import math

import numpy as np
import pytest

from casimir_ht import asymptotics as asy
from casimir_ht import core
from casimir_ht.errors import DomainError
from casimir_ht.specfun import ZETA3

import oracles

# bispherical reference values, converged to ~1e-10
NUMERIC = {0.1: -0.7020434766806003, 2e-3: -3.0773696786, 1e-5: -9.3686755546}


def test_m_half_against_s_sum():
    np.testing.assert_allclose(asy.delta_phi_m_half(1, 2e-3),
                               oracles.delta_phi_m_half_ssum(1, 2e-3), rtol=1e-9)


def test_m_half_negative_and_decreasing_in_m():
    vals = [asy.delta_phi_m_half(m, 1e-3) for m in (1, 2, 5, 20)]
    assert all(v < 0 for v in vals)
    assert all(abs(a) > abs(b) for a, b in zip(vals, vals[1:]))


def test_m_half_domain():
    with pytest.raises(DomainError):
        asy.delta_phi_m_half(0, 1e-3)
    with pytest.raises(DomainError):
        asy.delta_phi_m_half(1.5, 1e-3)


def test_delta_phi_short_2e3():
    v = asy.delta_phi_short(2e-3)
    assert abs(v - (-3.068)) < 5e-4
    assert abs(v - NUMERIC[2e-3]) / abs(NUMERIC[2e-3]) < 3e-3


def test_delta_phi_short_jobs_independent():
    assert asy.delta_phi_short(1e-2, jobs=1) == asy.delta_phi_short(1e-2, jobs=3)


def test_delta_phi_as_against_s_sum():
    np.testing.assert_allclose(asy.delta_phi_as(1e-4), oracles.delta_phi_as_ssum(1e-4),
                               rtol=1e-11)


def test_leading_correction():
    assert asy.leading_correction(1e-4) == pytest.approx(-math.log(1e-4) ** 2 / 16)


def test_dirichlet_short_close_to_exact():
    for x in (1e-3, 1e-2):
        exact = core.phi_dirichlet(x)
        approx = asy.phi_dirichlet_short(x)
        assert abs(approx - exact) / exact < 1e-6


def test_drude_short_spot_value():
    # only asymptotic; compare to the exact value at the 1e-4 level
    assert abs(asy.phi_drude_short(2e-3) - core.phi_drude(2e-3)) < 1e-3


def test_drude_short_domain():
    asy.phi_drude_short(10.0)   # gamma1 - ln(mu) still positive here
    with pytest.raises(DomainError):
        asy.phi_drude_short(20.0)


def test_perfect_short_leading_terms():
    x = 1e-6
    assert asy.phi_perfect_short(x) == pytest.approx(ZETA3 / (4 * x) - math.log(x) ** 2 / 16)


def test_beta_composition():
    x = 2e-3
    d, dr = core.phi_dirichlet(x), core.phi_drude(x)
    dphi = NUMERIC[x]
    b = {m: asy.beta(m, x, dphi, d, dr) for m in asy.BETA_MODELS}
    np.testing.assert_allclose(b["N"], asy.beta_from_phi("D", x, d + dphi), rtol=1e-12)
    np.testing.assert_allclose(b["P"], asy.beta_from_phi("P", x, d + dr + dphi), rtol=1e-12)
    with pytest.raises(DomainError):
        asy.beta("Q", x, dphi, d, dr)

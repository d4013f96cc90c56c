from fractions import Fraction

import numpy as np
import pytest

from casimir_ht import core, spherical as sp
from casimir_ht.errors import DomainError, SpectralRadiusError

import oracles

TIGHT = core.SeriesTolerance(rel_tol=1e-15)


def test_diagonal_corner_entry():
    for m in (0, 2, 5):
        blk = sp.spherical_matrix("D", m, 0.3, m + 3)
        assert blk.matrix[0, 0] == pytest.approx((1 / 2.6) ** (2 * m + 1), rel=1e-14)


def test_neumann_ratio():
    d = sp.spherical_matrix("D", 2, 0.2, 30).matrix
    n = sp.spherical_matrix("N", 2, 0.2, 30).matrix
    l = np.arange(2, 31)
    np.testing.assert_allclose(n / d, np.broadcast_to((l / (l + 1.0))[:, None], d.shape),
                               rtol=1e-15)


def test_exact_rational_entries():
    x = Fraction(1)
    blk_d = sp.spherical_matrix("D", 0, 1.0, 10).matrix
    blk_n = sp.spherical_matrix("N", 0, 1.0, 10).matrix
    for l in range(11):
        for lp in range(11):
            np.testing.assert_allclose(blk_d[l, lp], float(oracles.spherical_entry_exact("D", 0, l, lp, x)),
                                       rtol=1e-13)
            np.testing.assert_allclose(blk_n[l, lp], float(oracles.spherical_entry_exact("N", 0, l, lp, x)),
                                       rtol=1e-13)


def test_log_space_matches_rationals_up_to_20():
    x = Fraction(3, 10)
    for m in (0, 1, 4):
        blk = sp.spherical_matrix("D", m, 0.3, 20 - m).matrix
        for i, l in enumerate(range(m, 21 - m)):
            for j, lp in enumerate(range(m, 21 - m)):
                if l + lp > 20:
                    continue
                want = float(oracles.spherical_entry_exact("D", m, l, lp, x))
                assert blk[i, j] == pytest.approx(want, rel=1e-12)


def test_argument_errors():
    with pytest.raises(DomainError):
        sp.spherical_matrix("R", 0, 1.0, 5)
    with pytest.raises(DomainError):
        sp.spherical_matrix("D", 6, 1.0, 5)
    with pytest.raises(DomainError):
        sp.delta_phi_spherical(0.01, 20)


def test_spectral_radius_guard():
    blk = sp.SphericalBlock(m=0, bc="D", l_max=1, matrix=np.array([[1.2, 0.0], [0.0, 0.1]]))
    with pytest.raises(SpectralRadiusError):
        sp.phi_block_spherical(blk)


@pytest.mark.parametrize("x", [0.5, 1.0, 2.0])
def test_dirichlet_reproduces_exact_series(x):
    np.testing.assert_allclose(sp.phi_spherical("D", x, 80), core.phi_dirichlet(x, TIGHT),
                               rtol=1e-8)


def test_neumann_m0_block():
    g = core.geometry_from_aspect_ratio(0.5)
    blk = sp.spherical_matrix("N", 0, 0.5, 40)
    np.testing.assert_allclose(sp.phi_block_spherical(blk), core.phi0_neumann(g, TIGHT), rtol=1e-8)


def test_neumann_block_below_dirichlet():
    for m, x, L in ((0, 0.2, 30), (3, 0.5, 20), (1, 1.0, 15)):
        n = sp.phi_block_spherical(sp.spherical_matrix("N", m, x, L))
        d = sp.phi_block_spherical(sp.spherical_matrix("D", m, x, L))
        assert n < d


def test_x1_agreement_tight():
    from casimir_ht import bispherical as bi
    v = bi.delta_phi_numeric(1.0, bi.TruncationPolicy(rel_tol=1e-12))[0]
    assert abs(sp.delta_phi_spherical(1.0, 40) - v) / abs(v) < 1e-9


def test_large_x_vanishes():
    for x in (50.0, 500.0):
        assert -1.0 / (2 * x) < sp.delta_phi_spherical(x, 10) < 0

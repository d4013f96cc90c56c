import math

import numpy as np
import pytest

from casimir_ht import specfun
from casimir_ht.errors import DomainError

import oracles

# mpmath at 30 digits
MP_LI = {
    (1.5, 0.3): 0.3383110955448062693,
    (1.5, 0.999): 2.5017084653413556287,
    (1.5, 1 - 1e-9): 2.6122632503230720277,
    (2.0, 0.3): 0.32612951007547605633,
    (2.0, 0.999): 1.6370226052761177366,
    (2.0, 1 - 1e-9): 1.644934045124961175,
}


@pytest.mark.parametrize("s,z", sorted(MP_LI))
def test_polylog_against_mpmath(s, z):
    np.testing.assert_allclose(specfun.polylog(s, z), MP_LI[(s, z)], rtol=2e-15)


def test_polylog_three_halves_series_oracle():
    # 10^6-term direct sum; truncation remainder below 1e-300
    ref = oracles.polylog_series(1.5, 0.95)
    assert ref == pytest.approx(1.88415733341162902744, rel=1e-15)
    np.testing.assert_allclose(specfun.polylog(1.5, 0.95), ref, rtol=1e-14)


def test_polylog_dilog_series_oracle():
    np.testing.assert_allclose(specfun.polylog(2, 0.95), oracles.polylog_series(2.0, 0.95),
                               rtol=1e-14)


def test_polylog_small_and_zero():
    assert specfun.polylog(1.5, 0.0) == 0.0
    assert specfun.polylog(2, 1e-300) == pytest.approx(1e-300, rel=1e-15)


def test_polylog_limits_at_one():
    np.testing.assert_allclose(specfun.polylog_exp(2, 0.0), math.pi ** 2 / 6, rtol=1e-15)
    np.testing.assert_allclose(specfun.polylog_exp(1.5, 0.0), 2.612375348685488, rtol=1e-15)


def test_polylog_domain():
    for z in (1.0, -0.1, 1.5, float("nan")):
        with pytest.raises(DomainError):
            specfun.polylog(1.5, z)
    with pytest.raises(DomainError):
        specfun.polylog(3, 0.5)


def test_polylog_shapes():
    z = np.array([[0.1, 0.2], [0.3, 0.4]])
    out = specfun.polylog(2, z)
    assert out.shape == (2, 2)
    assert isinstance(specfun.polylog(2, 0.5), float)


def test_polylog_exp_matches_polylog():
    eps = np.array([1e-8, 1e-3, 0.04, 0.05, 0.06, 1.0, 30.0])
    for s in (1.5, 2):
        np.testing.assert_allclose(specfun.polylog_exp(s, eps), specfun.polylog(s, np.exp(-eps)),
                                   rtol=1e-13)


@pytest.mark.parametrize("s", [1.5, 2.0])
@pytest.mark.parametrize("eps,delta", [(1e-6, 1e-9), (0.01, 0.02), (0.3, 0.1), (2.0, 0.5),
                                       (1e-3, 5.0), (0.0, 1e-4)])
def test_polylog_exp_diff_against_mpmath(s, eps, delta):
    import mpmath
    mpmath.mp.dps = 40
    ref = float(mpmath.polylog(s, mpmath.exp(-mpmath.mpf(eps) - mpmath.mpf(delta)))
                - mpmath.polylog(s, mpmath.exp(-mpmath.mpf(eps))))
    np.testing.assert_allclose(specfun.polylog_exp_diff(s, eps, delta), ref, rtol=1e-12)


def test_polylog_exp_diff_zero_delta():
    assert specfun.polylog_exp_diff(1.5, 0.2, 0.0) == 0.0


def test_log_factorial():
    assert specfun.log_factorial(0) == 0.0
    assert specfun.log_factorial(1) == 0.0
    np.testing.assert_allclose(specfun.log_factorial(10), math.log(3628800), rtol=1e-15)
    # mpmath loggamma(10001)
    np.testing.assert_allclose(specfun.log_factorial(10000), 82108.9278368143534553850300635,
                               rtol=1e-15)
    n = np.arange(0, 600)
    np.testing.assert_allclose(specfun.log_factorial(n), [math.lgamma(k + 1) for k in n],
                               rtol=1e-14, atol=1e-14)


def test_log_factorial_domain():
    with pytest.raises(DomainError):
        specfun.log_factorial(-1)
    with pytest.raises(DomainError):
        specfun.log_factorial(2.5)


def test_zeta3():
    from scipy.special import zeta
    assert specfun.zeta3() == pytest.approx(zeta(3.0), rel=1e-16)

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.integrate import quad

from maglev_cavity.elliptic import elliptic_E, elliptic_K
from maglev_cavity.exceptions import DomainError


def quad_K(k):
    return quad(lambda t: 1.0 / math.sqrt(1.0 - (k * math.sin(t)) ** 2), 0, math.pi / 2,
                epsabs=1e-14, epsrel=1e-13, limit=200)[0]


def quad_E(k):
    return quad(lambda t: math.sqrt(1.0 - (k * math.sin(t)) ** 2), 0, math.pi / 2,
                epsabs=1e-14, epsrel=1e-13, limit=200)[0]


def test_special_values():
    assert elliptic_K(0.0) == pytest.approx(math.pi / 2, abs=1e-15)
    assert elliptic_E(0.0) == pytest.approx(math.pi / 2, abs=1e-15)
    assert elliptic_E(1.0) == pytest.approx(1.0, abs=1e-12)


def test_reference_modulus():
    assert elliptic_K(0.8) == pytest.approx(quad_K(0.8), abs=1e-12)
    assert elliptic_K(0.8) == pytest.approx(1.995302778, abs=1e-9)
    assert elliptic_E(0.8) == pytest.approx(quad_E(0.8), abs=1e-12)


def test_against_quadrature():
    ks = np.linspace(0.0, 0.999, 50)
    np.testing.assert_allclose(elliptic_K(ks), [quad_K(k) for k in ks], rtol=0, atol=1e-10)
    np.testing.assert_allclose(elliptic_E(ks), [quad_E(k) for k in ks], rtol=0, atol=1e-10)


@given(st.floats(0.01, 0.99))
def test_legendre_relation(k):
    kp = math.sqrt(1 - k * k)
    K, E = elliptic_K(k), elliptic_E(k)
    Kp, Ep = elliptic_K(kp), elliptic_E(kp)
    assert E * Kp + Ep * K - K * Kp == pytest.approx(math.pi / 2, abs=1e-10)


def test_monotone():
    ks = np.linspace(0, 0.999, 400)
    assert np.all(np.diff(elliptic_K(ks)) > 0)
    assert np.all(np.diff(elliptic_E(ks)) < 0)


def test_domain():
    with pytest.raises(DomainError):
        elliptic_K(1.0)
    with pytest.raises(DomainError):
        elliptic_E(1.5)
    with pytest.raises(DomainError):
        elliptic_K(-0.1)

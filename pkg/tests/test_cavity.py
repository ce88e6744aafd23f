import math
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.optimize import brentq

from maglev_cavity.cavity import (DEFAULT_GEOMETRY, DEFAULT_K_LEV, CavityGeometry,
                                  ShiftModel, bare_capacitance, calibration_check,
                                  coax_inductance, evanescent_constant,
                                  force_balance_height, freq_shift_from_height,
                                  height_from_freq, mode_profile, resonant_frequency)
from maglev_cavity.constants import BESSEL_J0_ZERO, C_LIGHT, G, MU0
from maglev_cavity.exceptions import DomainError, NoLevitationError
from maglev_cavity.magnet import dipole_moment, mass


def test_inductance_value():
    L = coax_inductance(DEFAULT_GEOMETRY)
    assert L == pytest.approx(MU0 * 7.5e-3 * math.log(2.5) / (2 * math.pi), rel=1e-14)
    assert L == pytest.approx(1.37e-9, rel=5e-3)


def test_inductance_linear_in_height():
    tall = replace(DEFAULT_GEOMETRY, h_s=2 * DEFAULT_GEOMETRY.h_s, depth=0.03)
    assert coax_inductance(tall) == pytest.approx(2 * coax_inductance(DEFAULT_GEOMETRY))


def test_resonance_basic():
    assert resonant_frequency(1.0, 1.0) == pytest.approx(1 / (2 * math.pi))
    assert resonant_frequency(1.0, 4.0) == pytest.approx(0.5 * resonant_frequency(1.0, 1.0))
    with pytest.raises(DomainError):
        resonant_frequency(0.0, 1.0)


def test_bare_capacitance_roundtrip():
    C = bare_capacitance(DEFAULT_GEOMETRY)
    assert C == pytest.approx(1.83e-13, rel=0.01)
    assert resonant_frequency(coax_inductance(DEFAULT_GEOMETRY), C) == pytest.approx(10.04e9)


def test_evanescent_constant_value():
    lam = C_LIGHT / 10.04e9
    beta = evanescent_constant(DEFAULT_GEOMETRY, lam)
    expected = math.sqrt((BESSEL_J0_ZERO / 5e-3) ** 2 - (2 * math.pi / lam) ** 2)
    assert beta == pytest.approx(expected, rel=1e-14)
    assert beta == pytest.approx(432.4, abs=0.1)


def test_evanescent_static_limit():
    beta = evanescent_constant(DEFAULT_GEOMETRY, 1e12)
    assert beta == pytest.approx(BESSEL_J0_ZERO / 5e-3, rel=1e-12)


def test_evanescent_increases_as_radius_shrinks():
    lam = DEFAULT_GEOMETRY.wavelength
    radii = np.linspace(5e-3, 2.5e-3, 20)
    betas = [evanescent_constant(replace(DEFAULT_GEOMETRY, r_c=r), lam) for r in radii]
    assert np.all(np.diff(betas) > 0)


def test_cutoff_rejected():
    r_c = BESSEL_J0_ZERO * DEFAULT_GEOMETRY.wavelength / (2 * math.pi)
    with pytest.raises(DomainError):
        evanescent_constant(replace(DEFAULT_GEOMETRY, r_c=r_c), DEFAULT_GEOMETRY.wavelength)


def test_freq_shift_value():
    model = ShiftModel(beta_ev=430.0, A=0.1, f0=10.04e9)
    f = freq_shift_from_height(1e-3, model)
    assert f == pytest.approx(10.04e9 * math.sqrt(1 - 0.1 * math.exp(-0.86)), rel=1e-14)
    assert f == pytest.approx(9.8253e9, rel=1e-5)


def test_freq_shift_limits():
    model = ShiftModel(beta_ev=430.0, A=0.1)
    assert freq_shift_from_height(1.0, model) == pytest.approx(model.f0, rel=1e-15)
    flat = ShiftModel(beta_ev=430.0, A=0.0)
    np.testing.assert_array_equal(freq_shift_from_height(np.linspace(0, 1e-2, 5), flat), flat.f0)
    with pytest.raises(DomainError):
        freq_shift_from_height(-1e-3, model)


@given(st.floats(1e-5, 1e-2))
def test_height_roundtrip(z):
    model = ShiftModel.from_geometry(DEFAULT_GEOMETRY)
    assert height_from_freq(freq_shift_from_height(z, model), model) == pytest.approx(z, rel=1e-9)


def test_height_midpoint_and_asymptote():
    model = ShiftModel(beta_ev=430.0, A=0.1)
    z = height_from_freq(model.f0 * math.sqrt(1 - model.A / 2), model)
    assert z == pytest.approx(math.log(2) / (2 * 430.0))
    assert height_from_freq(model.f0 * (1 - 1e-12), model) > 1e-2
    with pytest.raises(NoLevitationError):
        height_from_freq(model.f0, model)


def _image_force_height(magnet):
    # Axial dipole above a perfect diamagnet: image dipole at distance 2z,
    # anti-parallel, with the 1/2 of an induced interaction.
    m = dipole_moment(magnet)

    def U(z):
        D = 2 * z
        return 0.5 * MU0 * 2 * m * m / (4 * math.pi * D ** 3)

    def net_force(z, h=1e-9):
        return -(U(z + h) - U(z - h)) / (2 * h) - mass(magnet) * G

    return brentq(net_force, 1e-5, 0.1, xtol=1e-15, rtol=1e-12)


def test_force_balance_matches_image_oracle(magnet):
    assert force_balance_height(magnet) == pytest.approx(_image_force_height(magnet), rel=1e-6)


def test_force_balance_scaling(magnet):
    z = force_balance_height(magnet)
    strong = replace(magnet, remanence=2 * magnet.remanence, grade=None)
    assert force_balance_height(strong) == pytest.approx(math.sqrt(2) * z, rel=1e-12)
    assert force_balance_height(magnet, 16 * DEFAULT_K_LEV) == pytest.approx(2 * z, rel=1e-12)
    with pytest.raises(NoLevitationError):
        force_balance_height(replace(magnet, remanence=0.0, grade=None))


def test_calibration_check_linear(magnet):
    model = ShiftModel.from_geometry(DEFAULT_GEOMETRY)
    table = calibration_check(np.linspace(0.5, 2.0, 20), model, magnet)
    assert table.shape == (20, 2)
    r = np.corrcoef(table[:, 0], table[:, 1])[0, 1]
    assert r * r > 0.999
    assert calibration_check([], model, magnet).shape == (0, 2)
    assert calibration_check([1.44], model, magnet).shape == (1, 2)


def test_mode_profile():
    g = DEFAULT_GEOMETRY
    assert mode_profile(g, g.r_s, 0.0) == pytest.approx(1.0)
    z = np.linspace(0, 5e-3, 50)
    assert np.all(np.diff(mode_profile(g, 1e-3, z)) < 0)
    r = np.linspace(0, g.r_c, 501)
    prof = mode_profile(g, r, 0.0)
    assert abs(r[np.argmax(prof)] - g.r_s) <= r[1] - r[0]


def test_geometry_invariants():
    with pytest.raises(DomainError):
        CavityGeometry(r_c=2e-3, r_s=2e-3, h_s=7.5e-3, depth=12.5e-3, f0=1e10)
    with pytest.raises(DomainError):
        CavityGeometry(r_c=5e-3, r_s=2e-3, h_s=13e-3, depth=12.5e-3, f0=1e10)

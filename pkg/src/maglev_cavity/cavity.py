"""Lumped-element and evanescent-mode model of a coaxial quarter-wave cavity.

The cavity is a cylinder of radius ``r_c`` with a central stub of radius
``r_s`` and height ``h_s``. Above the stub the empty cylinder acts as a
below-cutoff waveguide, so the mode energy decays as ``exp(-2 beta z)`` with
height ``z`` above the stub tip. A magnet there perturbs the capacitance,
which gives the frequency-shift <-> height relations implemented here.
"""

from dataclasses import dataclass
import math

import numpy as np

from .constants import BESSEL_J0_ZERO, C_LIGHT, G, MU0
from .exceptions import DomainError, NoLevitationError
from .magnet import dipole_moment, mass

# Point dipole above its own diamagnetic image: F = 3 mu0 m^2 / (32 pi z^4).
DEFAULT_K_LEV = 3.0 * MU0 / (32.0 * math.pi)
DEFAULT_SHIFT_A = 0.1

_CUTOFF_RTOL = 1e-9


@dataclass(frozen=True)
class CavityGeometry:
    r_c: float
    r_s: float
    h_s: float
    depth: float
    f0: float

    def __post_init__(self):
        if not 0 < self.r_s < self.r_c:
            raise DomainError("need 0 < r_s < r_c")
        if not 0 < self.h_s < self.depth:
            raise DomainError("need 0 < h_s < depth")
        if not self.f0 > 0:
            raise DomainError("f0 must be positive")

    @property
    def gap(self):
        return self.r_c - self.r_s

    @property
    def wavelength(self):
        return C_LIGHT / self.f0


# Inferred from the stub radius (2 mm) and ~3 mm gap; the experimental
# cavity dimensions are not published.
DEFAULT_GEOMETRY = CavityGeometry(r_c=5e-3, r_s=2e-3, h_s=7.5e-3,
                                  depth=12.5e-3, f0=10.04e9)


@dataclass(frozen=True)
class ShiftModel:
    """Parameters of ``(f0^2 - f^2) / f0^2 = A exp(-2 beta_ev z)``."""

    beta_ev: float
    A: float = DEFAULT_SHIFT_A
    f0: float = 10.04e9

    def __post_init__(self):
        if not self.beta_ev > 0:
            raise DomainError("beta_ev must be positive")
        if not self.A >= 0:
            raise DomainError("A must be non-negative")
        if not self.f0 > 0:
            raise DomainError("f0 must be positive")

    @classmethod
    def from_geometry(cls, geom, A=DEFAULT_SHIFT_A):
        return cls(beta_ev=evanescent_constant(geom, geom.wavelength), A=A,
                   f0=geom.f0)


def coax_inductance(geom):
    """Coaxial-section inductance ``mu0 h_s ln(r_c / r_s) / (2 pi)`` in H."""
    return MU0 * geom.h_s * math.log(geom.r_c / geom.r_s) / (2.0 * math.pi)


def resonant_frequency(L, C):
    """LC resonance ``1 / (2 pi sqrt(L C))`` in Hz."""
    if not (L > 0 and C > 0):
        raise DomainError("inductance and capacitance must be positive")
    return 1.0 / (2.0 * math.pi * math.sqrt(L * C))


def bare_capacitance(geom):
    """Capacitance back-solved from ``f0`` and the coaxial inductance."""
    L = coax_inductance(geom)
    return 1.0 / ((2.0 * math.pi * geom.f0) ** 2 * L)


def evanescent_constant(geom, wavelength):
    """Decay constant (1/m) of the TM01-like field above the stub.

    Returns ``sqrt(|(x01 / r_c)^2 - (2 pi / lambda)^2|)``. Decaying behaviour
    needs the section to be below cutoff, i.e. ``x01 / r_c > 2 pi / lambda``.
    """
    if not wavelength > 0:
        raise DomainError("wavelength must be positive")
    kc = BESSEL_J0_ZERO / geom.r_c
    k = 2.0 * math.pi / wavelength
    if abs(kc - k) <= _CUTOFF_RTOL * max(kc, k):
        raise DomainError("waveguide section is at cutoff")
    return math.sqrt(abs(kc * kc - k * k))


def freq_shift_from_height(z, model):
    """Perturbed resonance (Hz) for a magnet at height ``z`` above the stub."""
    z = np.asarray(z, dtype=float)
    if np.any(z < 0):
        raise DomainError("height must be non-negative")
    if model.A >= 1.0:
        raise DomainError("A >= 1 would drive f^2 non-positive at z = 0")
    ratio = model.A * np.exp(-2.0 * model.beta_ev * z)
    f = model.f0 * np.sqrt(1.0 - ratio)
    return f if f.ndim else float(f)


def height_from_freq(f, model):
    """Inverse of :func:`freq_shift_from_height`."""
    f = np.asarray(f, dtype=float)
    if np.any(f <= 0):
        raise DomainError("frequency must be positive")
    if np.any(f >= model.f0):
        raise NoLevitationError("no levitation solution for f >= f0")
    if model.A <= 0:
        raise NoLevitationError("A = 0 gives no frequency shift to invert")
    ratio = (model.f0 ** 2 - f ** 2) / model.f0 ** 2
    z = -np.log(ratio / model.A) / (2.0 * model.beta_ev)
    return z if z.ndim else float(z)


def shift_height_coordinate(f, model):
    """``-ln((f0^2 - f^2) / f0^2) / (2 beta_ev)``, the left side of the
    calibration relation (height up to an additive constant)."""
    f = np.asarray(f, dtype=float)
    ratio = (model.f0 ** 2 - f ** 2) / model.f0 ** 2
    out = -np.log(ratio) / (2.0 * model.beta_ev)
    return out if out.ndim else float(out)


def force_balance_height(magnet, k_lev=DEFAULT_K_LEV, g=G):
    """Height where ``k_lev m^2 / z^4`` balances the magnet weight ``M g``."""
    if not k_lev > 0:
        raise DomainError("k_lev must be positive")
    m = dipole_moment(magnet)
    if m <= 0:
        raise NoLevitationError("zero moment: no levitation")
    return (k_lev * m * m / (mass(magnet) * g)) ** 0.25


def calibration_check(remanences, model, magnet, k_lev=DEFAULT_K_LEV):
    """Tabulate ``(sqrt(B_r), shift-height coordinate)`` for each remanence.

    Each row uses ``magnet`` with its remanence replaced; the height comes
    from :func:`force_balance_height` and the frequency from
    :func:`freq_shift_from_height`. Returns an ``(n, 2)`` array.
    """
    from dataclasses import replace

    rows = []
    for Br in remanences:
        if not Br > 0:
            raise DomainError("remanence values must be positive")
        z = force_balance_height(replace(magnet, remanence=Br, grade=None), k_lev)
        f = freq_shift_from_height(z, model)
        rows.append((math.sqrt(Br), shift_height_coordinate(f, model)))
    return np.array(rows, dtype=float).reshape(-1, 2)


def mode_profile(geom, r, z, beta_ev=None):
    """Relative electric field amplitude, normalized to 1 at the stub rim.

    Radial part: ``exp(beta r)`` inside the stub, ``cos(k0 r) / r`` outside,
    with the inner amplitude fixed by continuity at ``r_s``. Axial part:
    ``exp(-beta z)`` above the stub tip.
    """
    r = np.asarray(r, dtype=float)
    z = np.asarray(z, dtype=float)
    if np.any(r < 0) or np.any(r > geom.r_c):
        raise DomainError("r must lie in [0, r_c]")
    if np.any(z < 0):
        raise DomainError("z must be non-negative")
    if beta_ev is None:
        beta_ev = evanescent_constant(geom, geom.wavelength)
    k0 = 2.0 * math.pi / geom.wavelength
    rim = math.cos(k0 * geom.r_s) / geom.r_s
    with np.errstate(divide="ignore", invalid="ignore"):
        outer = np.cos(k0 * r) / np.where(r > 0, r, 1.0)
    inner = rim * np.exp(beta_ev * (r - geom.r_s))
    radial = np.where(r < geom.r_s, inner, outer) / rim
    out = radial * np.exp(-beta_ev * z)
    return out if out.ndim else float(out)

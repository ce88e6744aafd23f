"""Cylindrical (disc) neodymium magnet: mass, moment and on-axis field."""

from dataclasses import dataclass
import math

import numpy as np

from .constants import GRADE_REMANENCE, MU0, NDFEB_DENSITY
from .exceptions import DomainError, UnknownGradeError

POLARIZATIONS = ("axial", "radial")


def grade_remanence(grade):
    """Remanence in tesla for a neodymium grade label such as ``"N42"``."""
    try:
        return GRADE_REMANENCE[str(grade).strip().upper()]
    except KeyError:
        raise UnknownGradeError(f"unknown grade {grade!r}") from None


@dataclass(frozen=True)
class MagnetSpec:
    """Disc magnet of radius ``radius`` and full thickness ``2 * half_thickness``.

    ``orientation`` is the tilt (rad) of the magnetization axis away from the
    stub surface normal. ``polarization`` is ``"axial"`` (moment along the
    disc axis) or ``"radial"`` (moment in the disc plane).
    """

    radius: float
    half_thickness: float
    remanence: float
    density: float = NDFEB_DENSITY
    orientation: float = 0.0
    grade: str | None = None
    polarization: str = "axial"

    def __post_init__(self):
        if not (self.radius > 0 and self.half_thickness > 0):
            raise DomainError("magnet radius and half-thickness must be positive")
        if not self.density > 0:
            raise DomainError("magnet density must be positive")
        if not self.remanence >= 0:
            raise DomainError("remanence must be non-negative")
        if not 0.0 <= self.orientation <= math.pi:
            raise DomainError("orientation must lie in [0, pi]")
        if self.polarization not in POLARIZATIONS:
            raise DomainError(f"polarization must be one of {POLARIZATIONS}")
        if self.grade is not None:
            expected = grade_remanence(self.grade)
            if not math.isclose(self.remanence, expected, rel_tol=1e-12):
                raise DomainError(
                    f"remanence {self.remanence} T does not match grade "
                    f"{self.grade} ({expected} T)")

    @classmethod
    def from_grade(cls, grade, radius, half_thickness, **kwargs):
        return cls(radius=radius, half_thickness=half_thickness,
                   remanence=grade_remanence(grade), grade=str(grade).upper(),
                   **kwargs)

    @property
    def thickness(self):
        return 2.0 * self.half_thickness

    @property
    def volume(self):
        return math.pi * self.radius ** 2 * self.thickness


def mass(spec):
    """Magnet mass ``2 pi R^2 b rho`` in kg."""
    return 2.0 * math.pi * spec.radius ** 2 * spec.half_thickness * spec.density


def dipole_moment(spec):
    """Magnetic moment ``B_r V / mu0`` in A m^2."""
    return spec.remanence * spec.volume / MU0


def axial_field(spec, Z):
    """On-axis flux density (T) at distance ``Z`` from the magnet centre.

    Uses the uniformly magnetized solenoid expression; it is exact outside
    the magnet and only approximate inside. Accepts scalars or arrays.
    """
    Z = np.asarray(Z, dtype=float)
    if not np.all(np.isfinite(Z)):
        raise DomainError("Z must be finite")
    R, b = spec.radius, spec.half_thickness
    up = Z + b
    dn = Z - b
    B = 0.5 * spec.remanence * (up / np.sqrt(R ** 2 + up ** 2)
                                - dn / np.sqrt(R ** 2 + dn ** 2))
    return B if B.ndim else float(B)


def dipole_axial_field(spec, Z):
    """Point-dipole far-field approximation ``mu0 m / (2 pi Z^3)``."""
    Z = np.asarray(Z, dtype=float)
    B = MU0 * dipole_moment(spec) / (2.0 * np.pi * np.abs(Z) ** 3)
    return B if B.ndim else float(B)

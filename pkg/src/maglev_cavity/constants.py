"""Physical constants and tabulated material data (SI units)."""

import math

MU0 = 4e-7 * math.pi  # T m / A
G = 9.80665  # m / s^2
C_LIGHT = 299_792_458.0  # m / s

# First zero of J0, TM01 cutoff of a circular guide.
BESSEL_J0_ZERO = 2.404825557695773

# Sintered NdFeB.
NDFEB_DENSITY = 7.4e3  # kg / m^3

# Linear thermal expansion 0-100 C, parallel / perpendicular to magnetization.
# Metadata only, no computation consumes these.
NDFEB_EXPANSION_PARALLEL = 5.2e-6  # 1 / K
NDFEB_EXPANSION_PERPENDICULAR = -0.8e-6  # 1 / K

# Neodymium grade -> remanence (T).
GRADE_REMANENCE = {
    "N35": 1.22,
    "N38": 1.26,
    "N40": 1.29,
    "N42": 1.32,
    "N45": 1.37,
    "N48": 1.42,
    "N50": 1.44,
    "N52": 1.47,
    "N54": 1.50,
}

"""Models of a magnet levitating in a superconducting coaxial stub cavity,
plus resonance and quality-factor analysis of cavity measurements."""

__version__ = "0.1.0"

from .cavity import (DEFAULT_GEOMETRY, CavityGeometry, ShiftModel,
                     calibration_check, coax_inductance, evanescent_constant,
                     force_balance_height, freq_shift_from_height,
                     height_from_freq, mode_profile, resonant_frequency)
from .classify import Thresholds, classify_event, classify_series
from .elliptic import elliptic_E, elliptic_K
from .estimators import LevitationModel, ResonanceFitter, RingdownFitter
from .exceptions import (ConfigError, DomainError, FitError, MaglevError,
                         NoLevitationError, SpectrumError, UnknownGradeError)
from .levitation import (EquilibriumOptions, LevitationConfig, Position,
                         calibrate_current, energy_landscape, find_equilibrium,
                         mirror_energy, total_energy, two_loop_energy)
from .magnet import MagnetSpec, axial_field, dipole_moment, mass
from .spectra import (QReport, RingdownTrace, Spectrum, coupling_from_powers,
                      find_resonance, fit_ringdown, fwhm, intrinsic_q,
                      load_ringdown, load_spectrum, loaded_q, lorentzian_fit,
                      q_from_ringdown, simplified_q0)
from .sweeps import (gap_sweep, orientation_sweep, remanence_sweep, run_sweep,
                     size_sweep)

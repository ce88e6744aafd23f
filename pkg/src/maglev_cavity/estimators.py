"""Estimator wrappers around the fitting routines.

These follow the scikit-learn conventions (constructor stores parameters,
``fit`` returns ``self`` and sets trailing-underscore attributes), so they
compose with ``clone``, ``get_params`` and friends.
"""

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_array, check_is_fitted

from . import spectra
from .cavity import DEFAULT_GEOMETRY
from .levitation import (EquilibriumOptions, LevitationConfig, calibrate_current,
                         energy_field, find_equilibrium)
from .magnet import MagnetSpec


def _column(X, name):
    X = check_array(X, ensure_2d=False, dtype=float)
    if X.ndim == 2:
        if X.shape[1] != 1:
            raise ValueError(f"{name} must be one column")
        X = X[:, 0]
    return X


class ResonanceFitter(BaseEstimator):
    """Resonance frequency, bandwidth and Q of a single-resonance spectrum.

    ``fit(X, y)`` takes frequencies in Hz as ``X`` and amplitudes in dB as ``y``.
    """

    def __init__(self, kind="S21", method="three_dB", beta1=0.0, beta2=None):
        self.kind = kind
        self.method = method
        self.beta1 = beta1
        self.beta2 = beta2

    def fit(self, X, y):
        f = _column(X, "X")
        a = _column(y, "y")
        order = np.argsort(f, kind="stable")
        s = spectra.Spectrum(f[order], a[order], self.kind)
        report = spectra.analyze_spectrum(s, self.method, self.beta1, self.beta2)
        self.report_ = report
        self.f_r_ = report.f_r
        self.fwhm_ = report.fwhm
        self.q_loaded_ = report.q_loaded
        self.q0_ = report.q0
        if self.method == "lorentzian":
            fit = spectra.lorentzian_fit(s)
            self.peak_, self.background_ = fit.peak, fit.background
        else:
            _, extremum = spectra.find_resonance(s)
            p_ext = 10.0 ** (extremum / 10.0)
            if self.kind == "S21":
                self.peak_, self.background_ = p_ext, 0.0
            else:
                edge = np.concatenate([a[order][:len(a) // 10 + 1], a[order][-(len(a) // 10 + 1):]])
                bg = 10.0 ** (np.median(edge) / 10.0)
                self.peak_, self.background_ = p_ext - bg, bg
        return self

    def predict(self, X):
        """Model amplitude (dB) of the fitted Lorentzian at frequencies ``X``."""
        check_is_fitted(self, "f_r_")
        f = _column(X, "X")
        p = spectra.lorentzian(f, self.f_r_, self.fwhm_, self.peak_, self.background_)
        return 10.0 * np.log10(np.clip(p, np.finfo(float).tiny, None))


class RingdownFitter(BaseEstimator):
    """Exponential ring-down fit; ``fit(X, y)`` with times in s and voltages in V."""

    def __init__(self, f0=None, beta=0.0):
        self.f0 = f0
        self.beta = beta

    def fit(self, X, y):
        t = _column(X, "X")
        v = _column(y, "y")
        order = np.argsort(t, kind="stable")
        fit = spectra.fit_ringdown(spectra.RingdownTrace(t[order], v[order], self.f0))
        self.tau_ = fit.tau
        self.amplitude_ = fit.amplitude
        self.offset_ = fit.offset
        self.t0_ = fit.t0
        self.rms_ = fit.rms
        if self.f0 is not None:
            self.q0_ = spectra.q_from_ringdown(self.f0, fit.tau, self.beta)
        return self

    def predict(self, X):
        check_is_fitted(self, "tau_")
        t = _column(X, "X")
        return self.amplitude_ * np.exp(-(t - self.t0_) / self.tau_) + self.offset_


class LevitationModel(BaseEstimator):
    """Energy model with the supercurrent calibrated to a measured height.

    With ``current`` given, ``fit`` uses it as is; otherwise it solves for the
    current that puts the equilibrium at ``target_height`` (m). ``predict``
    returns total energies (J) for an ``(n, 2)`` array of ``(x, z)``
    positions in metres.
    """

    def __init__(self, magnet=None, geometry=None, current=None,
                 target_height=2.1e-3, options=None):
        self.magnet = magnet
        self.geometry = geometry
        self.current = current
        self.target_height = target_height
        self.options = options

    def fit(self, X=None, y=None):
        magnet = self.magnet or MagnetSpec.from_grade("N50", 0.5e-3, 0.25e-3)
        geom = self.geometry or DEFAULT_GEOMETRY
        opts = self.options or EquilibriumOptions()
        cfg = LevitationConfig.default(magnet, geom)
        if self.current is not None:
            cfg = LevitationConfig(self.current, cfg.wall_distance)
        else:
            cfg = calibrate_current(magnet, geom, cfg, self.target_height, opts)
        self.magnet_, self.geometry_, self.config_ = magnet, geom, cfg
        self.current_ = cfg.current
        self.equilibrium_ = find_equilibrium(magnet, geom, cfg, opts)
        return self

    def predict(self, X):
        check_is_fitted(self, "config_")
        X = check_array(X, dtype=float)
        if X.shape[1] != 2:
            raise ValueError("positions must have two columns (x, z)")
        return energy_field(self.magnet_, self.geometry_, self.config_,
                            X[:, 0], X[:, 1], self.magnet_.orientation)

"""Resonance and quality-factor extraction from spectra and ring-down traces."""

from collections import namedtuple
from dataclasses import asdict, dataclass
import csv
import io
import json
import math
import warnings

import numpy as np
from scipy.optimize import least_squares

from .exceptions import DomainError, FitError, SpectrumError

KINDS = ("S21", "S11")
METHODS = ("three_dB", "lorentzian", "ringdown")

MIN_SPECTRUM_SAMPLES = 8
MIN_TRACE_SAMPLES = 16


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Frequency sweep (Hz) with amplitudes in dB.

    ``kind`` is ``"S21"`` (transmission, resonance is a peak) or ``"S11"``
    (reflection, resonance is a dip).
    """

    frequency: np.ndarray
    amplitude_db: np.ndarray
    kind: str = "S21"

    def __post_init__(self):
        f = np.asarray(self.frequency, dtype=float)
        a = np.asarray(self.amplitude_db, dtype=float)
        object.__setattr__(self, "frequency", f)
        object.__setattr__(self, "amplitude_db", a)
        if self.kind not in KINDS:
            raise SpectrumError(f"kind must be one of {KINDS}")
        if f.ndim != 1 or f.shape != a.shape:
            raise SpectrumError("frequency and amplitude must be 1-D and equal length")
        if f.size < MIN_SPECTRUM_SAMPLES:
            raise SpectrumError(f"need at least {MIN_SPECTRUM_SAMPLES} samples")
        if not (np.all(np.isfinite(f)) and np.all(np.isfinite(a))):
            raise SpectrumError("non-finite samples")
        if np.any(np.diff(f) <= 0):
            raise SpectrumError("non-monotonic frequency")

    def __len__(self):
        return self.frequency.size


@dataclass(frozen=True, eq=False)
class RingdownTrace:
    time: np.ndarray
    voltage: np.ndarray
    f0: float | None = None

    def __post_init__(self):
        t = np.asarray(self.time, dtype=float)
        v = np.asarray(self.voltage, dtype=float)
        object.__setattr__(self, "time", t)
        object.__setattr__(self, "voltage", v)
        if t.ndim != 1 or t.shape != v.shape:
            raise SpectrumError("time and voltage must be 1-D and equal length")
        if t.size < MIN_TRACE_SAMPLES:
            raise SpectrumError(f"need at least {MIN_TRACE_SAMPLES} samples")
        if not (np.all(np.isfinite(t)) and np.all(np.isfinite(v))):
            raise SpectrumError("non-finite samples")
        if np.any(np.diff(t) <= 0):
            raise SpectrumError("time must be strictly increasing")


@dataclass(frozen=True)
class QReport:
    f_r: float
    fwhm: float
    q_loaded: float
    q0: float
    method: str
    beta1: float = 0.0
    beta2: float | None = None

    def __post_init__(self):
        for name in ("f_r", "fwhm", "q_loaded", "q0", "beta1"):
            object.__setattr__(self, name, float(getattr(self, name)))
        if self.beta2 is not None:
            object.__setattr__(self, "beta2", float(self.beta2))
        if self.method not in METHODS:
            raise DomainError(f"method must be one of {METHODS}")

    def to_dict(self):
        return {"f_r_hz": self.f_r, "fwhm_hz": self.fwhm,
                "q_loaded": self.q_loaded, "beta1": self.beta1,
                "beta2": self.beta2, "q0": self.q0, "method": self.method}

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2)

    def to_csv_line(self):
        b2 = "" if self.beta2 is None else repr(self.beta2)
        return (f"{self.f_r!r},{self.fwhm!r},{self.q_loaded!r},{self.beta1!r},"
                f"{b2},{self.q0!r},{self.method}")


QREPORT_CSV_HEADER = "f_r_hz,fwhm_hz,q_loaded,beta1,beta2,q0,method"


def _read_text(source):
    if hasattr(source, "read"):
        return source.read()
    with open(source, newline="") as fh:
        return fh.read()


def _read_columns(source, names):
    text = _read_text(source)
    reader = csv.reader(io.StringIO(text))
    try:
        header = [h.strip().lower() for h in next(reader)]
    except StopIteration:
        raise SpectrumError("empty file") from None
    try:
        cols = [header.index(n) for n in names]
    except ValueError:
        raise SpectrumError(f"line 1: header must contain {','.join(names)}") from None
    kind_col = header.index("kind") if "kind" in header else None
    rows, kinds = [], set()
    for lineno, row in enumerate(reader, start=2):
        if not row or all(not c.strip() for c in row):
            continue
        try:
            rows.append([float(row[c]) for c in cols])
        except (IndexError, ValueError):
            raise SpectrumError(f"line {lineno}: malformed row {row!r}") from None
        if kind_col is not None and kind_col < len(row) and row[kind_col].strip():
            kinds.add(row[kind_col].strip().upper())
    data = np.array(rows, dtype=float).reshape(-1, len(names))
    return data, kinds


def _sort_checked(x, y, what):
    order = np.argsort(x, kind="stable")
    if np.any(np.diff(x[order]) == 0):
        raise SpectrumError(f"non-monotonic {what}")
    if np.any(np.diff(x) < 0):
        warnings.warn(f"{what} column was not sorted; rows reordered", stacklevel=3)
    return x[order], y[order]


def load_spectrum(source, kind=None):
    """Read a ``frequency_hz,amplitude_db`` CSV (path or text stream).

    An optional ``kind`` column (``S21``/``S11``) is honoured when ``kind``
    is not given explicitly; the default is S21.
    """
    data, kinds = _read_columns(source, ("frequency_hz", "amplitude_db"))
    if len(data) < MIN_SPECTRUM_SAMPLES:
        raise SpectrumError(f"need at least {MIN_SPECTRUM_SAMPLES} samples, got {len(data)}")
    if kind is None:
        if len(kinds) > 1:
            raise SpectrumError("mixed kind column")
        kind = kinds.pop() if kinds else "S21"
    f, a = _sort_checked(data[:, 0], data[:, 1], "frequency")
    return Spectrum(f, a, kind)


def load_ringdown(source, f0=None):
    data, _ = _read_columns(source, ("time_s", "voltage_v"))
    if len(data) < MIN_TRACE_SAMPLES:
        raise SpectrumError(f"need at least {MIN_TRACE_SAMPLES} samples, got {len(data)}")
    t, v = _sort_checked(data[:, 0], data[:, 1], "time")
    return RingdownTrace(t, v, f0)


def write_spectrum(s, fh):
    fh.write("frequency_hz,amplitude_db\n")
    for f, a in zip(s.frequency, s.amplitude_db):
        fh.write(f"{float(f)!r},{float(a)!r}\n")


def write_ringdown(trace, fh):
    fh.write("time_s,voltage_v\n")
    for t, v in zip(trace.time, trace.voltage):
        fh.write(f"{float(t)!r},{float(v)!r}\n")


def _signed(s):
    # Work with a peak in every case: S11 dips are flipped.
    return s.amplitude_db if s.kind == "S21" else -s.amplitude_db


def find_resonance(s):
    """Resonance frequency and extremal amplitude (dB).

    The extremum sample is refined with a three-point parabola.
    """
    y = _signed(s)
    i = int(np.argmax(y))
    if i == 0 or i == len(y) - 1:
        raise SpectrumError("resonance at window edge")
    f = s.frequency
    y0, y1, y2 = y[i - 1], y[i], y[i + 1]
    x0, x1, x2 = f[i - 1], f[i], f[i + 1]
    denom = (x0 - x1) * (x0 - x2) * (x1 - x2)
    a = (x2 * (y1 - y0) + x1 * (y0 - y2) + x0 * (y2 - y1)) / denom
    b = (x2 ** 2 * (y0 - y1) + x1 ** 2 * (y2 - y0) + x0 ** 2 * (y1 - y2)) / denom
    if a < 0:
        fr = -b / (2 * a)
        fr = min(max(fr, x0), x2)
        c = y1 - a * x1 ** 2 - b * x1
        peak = a * fr ** 2 + b * fr + c
    else:
        fr, peak = x1, y1
    peak = peak if s.kind == "S21" else -peak
    return float(fr), float(peak)


def _crossing(f, y, level, start, step):
    i = start
    while 0 <= i + step < len(y):
        j = i + step
        if y[j] <= level:
            # linear interpolation between samples i (above) and j (below)
            return f[i] + (level - y[i]) * (f[j] - f[i]) / (y[j] - y[i])
        i = j
    return None


def fwhm(s, f_r, drop_db=3.0):
    """Full width at the level ``drop_db`` below the peak (above a dip)."""
    f = s.frequency
    if not f[0] < f_r < f[-1]:
        raise SpectrumError("f_r outside spectrum")
    y = _signed(s)
    i = int(np.clip(np.searchsorted(f, f_r), 1, len(f) - 1))
    i = i if abs(f[i] - f_r) < abs(f[i - 1] - f_r) else i - 1
    _, peak = find_resonance(s)
    peak = peak if s.kind == "S21" else -peak
    level = peak - drop_db
    lo = _crossing(f, y, level, i, -1)
    hi = _crossing(f, y, level, i, +1)
    if lo is None or hi is None:
        raise SpectrumError("insufficient span: 3 dB crossing missing")
    return float(hi - lo)


def loaded_q(f_r, delta_f):
    if not delta_f > 0:
        raise DomainError("bandwidth must be positive")
    return f_r / delta_f


def intrinsic_q(q_loaded, beta1=0.0, beta2=None):
    """``Q_L (1 + beta1)`` in reflection, ``Q_L (1 + beta1 + beta2)`` in transmission."""
    if not q_loaded > 0:
        raise DomainError("loaded Q must be positive")
    if beta1 < 0 or (beta2 is not None and beta2 < 0):
        raise DomainError("coupling coefficients must be non-negative")
    return q_loaded * (1.0 + beta1 + (beta2 or 0.0))


def coupling_from_powers(p_f, p_e, literal=False):
    """Coupling coefficient from the pulsed-trace power ratio.

    Default: ``1 / (2 sqrt(P_f/P_e) - 1)``. ``literal=True`` evaluates the
    alternative form ``1 / (2 sqrt(P_f/P_e - 1))`` instead.
    """
    if not (p_f > 0 and p_e > 0):
        raise DomainError("powers must be positive")
    ratio = p_f / p_e
    if literal:
        if not ratio > 1:
            raise DomainError("ratio out of model range")
        return 1.0 / (2.0 * math.sqrt(ratio - 1.0))
    denom = 2.0 * math.sqrt(ratio) - 1.0
    if not denom > 0:
        raise DomainError("ratio out of model range")
    return 1.0 / denom


def q_from_ringdown(f0, tau_d, beta=0.0):
    """Intrinsic Q ``2 pi f0 tau_d (1 + beta)``."""
    if not (f0 > 0 and tau_d > 0):
        raise DomainError("f0 and tau_d must be positive")
    if beta < 0:
        raise DomainError("beta must be non-negative")
    return 2.0 * math.pi * f0 * tau_d * (1.0 + beta)


def simplified_q0(geometry_factor, surface_resistance):
    """``G / R_s`` form of the intrinsic Q."""
    if not (geometry_factor > 0 and surface_resistance > 0):
        raise DomainError("geometry factor and surface resistance must be positive")
    return geometry_factor / surface_resistance


RingdownFit = namedtuple("RingdownFit", "tau amplitude offset rms t0")


def fit_ringdown(trace, max_iter=200, rtol=1e-10):
    """Fit ``A exp(-(t - t0) / tau) + c`` to the decay after the trace maximum.

    ``t0`` is the time of the maximum. Initial values come from the first
    sample (amplitude), the mean of the last 10 % (offset) and a log-linear
    fit over the first half of the decay (tau).
    """
    t, v = trace.time, trace.voltage
    k = int(np.argmax(v))
    t, v = t[k:], v[k:]
    if t.size < MIN_TRACE_SAMPLES // 2:
        raise FitError("decay segment too short")
    t0 = t[0]
    span = t[-1] - t0
    vscale = float(np.max(np.abs(v)))
    if vscale == 0 or span <= 0:
        raise FitError("non-decaying trace")
    s = (t - t0) / span
    y = v / vscale

    tail = y[-max(2, y.size // 10):]
    c0 = float(np.mean(tail))
    a0 = float(y[0] - c0)
    if not a0 > 10 * max(float(np.std(tail)), 1e-12):
        raise FitError("non-decaying trace")
    half = slice(0, max(3, y.size // 2))
    yy = y[half] - c0
    good = yy > 0.05 * a0
    if np.count_nonzero(good) >= 2:
        slope = np.polyfit(s[half][good], np.log(yy[good]), 1)[0]
        tau0 = -1.0 / slope if slope < 0 else 1.0
    else:
        tau0 = 0.1
    tau0 = min(max(tau0, 1e-4), 100.0)

    def resid(p):
        a, log_tau, c = p
        return a * np.exp(-s / np.exp(log_tau)) + c - y

    res = least_squares(resid, [a0, math.log(tau0), c0], method="lm",
                        xtol=rtol, ftol=1e-15, gtol=1e-15,
                        max_nfev=max_iter * 4)
    a, log_tau, c = res.x
    tau = math.exp(log_tau) * span
    if not (np.all(np.isfinite(res.x)) and 0 < tau <= 100 * span and a > 0):
        raise FitError(f"ring-down fit failed (tau={tau!r}, A={a * vscale!r})")
    rms = float(np.sqrt(np.mean(res.fun ** 2))) * vscale
    return RingdownFit(tau, float(a * vscale), float(c * vscale), rms, float(t0))


LorentzianFit = namedtuple("LorentzianFit", "f_r fwhm peak background residual")


def lorentzian(f, f_r, width, peak, background):
    """Linear-power Lorentzian ``background + peak / (1 + (2 (f - f_r) / width)^2)``.

    Use a negative ``peak`` for a reflection dip.
    """
    return background + peak / (1.0 + (2.0 * (np.asarray(f) - f_r) / width) ** 2)


def lorentzian_fit(s, max_nfev=2000):
    """Least-squares Lorentzian (in linear power) with constant background."""
    f = s.frequency
    p = 10.0 ** (s.amplitude_db / 10.0)
    scale = float(np.max(p))
    y = p / scale
    fc = float(f[len(f) // 2])
    span = float(f[-1] - f[0])
    u = (f - fc) / span

    sign = 1.0 if s.kind == "S21" else -1.0
    try:
        fr0, _ = find_resonance(s)
        w0 = fwhm(s, fr0)
    except SpectrumError:
        i = int(np.argmax(sign * y))
        fr0, w0 = float(f[i]), span / 10
    bg0 = float(np.median(np.concatenate([y[:len(y) // 10 + 1], y[-(len(y) // 10 + 1):]])))
    if s.kind == "S21":
        pk0 = float(np.max(y)) - bg0
    else:
        pk0 = float(np.min(y)) - bg0

    def resid(q):
        x0, lw, pk, bg = q
        return bg + pk / (1.0 + (2.0 * (u - x0) / np.exp(lw)) ** 2) - y

    q0 = [(fr0 - fc) / span, math.log(max(w0, span * 1e-6) / span), pk0, bg0]
    res = least_squares(resid, q0, method="lm", xtol=1e-12, ftol=1e-14,
                        max_nfev=max_nfev)
    x0, lw, pk, bg = res.x
    width = math.exp(lw) * span
    fr = fc + x0 * span
    if not (res.success and np.all(np.isfinite(res.x)) and f[0] < fr < f[-1]
            and sign * pk > 0):
        raise FitError(f"Lorentzian fit did not converge: {res.message} "
                       f"(f_r={fr!r}, fwhm={width!r}, peak={pk * scale!r})")
    rms = float(np.sqrt(np.mean(res.fun ** 2))) * scale
    return LorentzianFit(float(fr), float(width), float(pk * scale),
                         float(bg * scale), rms)


def analyze_spectrum(s, method="three_dB", beta1=0.0, beta2=None):
    """Resonance frequency, width and Q for a spectrum."""
    if method == "three_dB":
        fr, _ = find_resonance(s)
        width = fwhm(s, fr)
    elif method == "lorentzian":
        fit = lorentzian_fit(s)
        fr, width = fit.f_r, fit.fwhm
    else:
        raise DomainError(f"unknown spectrum method {method!r}")
    ql = loaded_q(fr, width)
    return QReport(fr, width, ql, intrinsic_q(ql, beta1, beta2), method,
                   beta1, beta2)


def analyze_ringdown(trace, f0=None, beta=0.0):
    f0 = trace.f0 if f0 is None else f0
    if f0 is None:
        raise DomainError("ring-down analysis needs the resonance frequency f0")
    fit = fit_ringdown(trace)
    ql = 2.0 * math.pi * f0 * fit.tau
    return QReport(f0, f0 / ql, ql, q_from_ringdown(f0, fit.tau, beta),
                   "ringdown", beta, None)


def synthetic_spectrum(f_r, width, span, n=1001, kind="S21", peak_db=-20.0,
                       background=0.0, noise=0.0, rng=None, offset_db=0.0):
    """Lorentzian test spectrum.

    ``background`` is in units of the peak power; ``noise`` is the RMS of
    additive Gaussian noise relative to the peak power. For S11 the dip
    depth equals the peak power below a unit-level background.
    """
    f = np.linspace(f_r - span / 2, f_r + span / 2, n)
    pk = 10.0 ** (peak_db / 10.0)
    if kind == "S21":
        p = lorentzian(f, f_r, width, pk, background * pk)
    else:
        p = lorentzian(f, f_r, width, -pk * (1 - 1e-3), pk)
    if noise:
        rng = np.random.default_rng(rng)
        p = p + rng.normal(0.0, noise * pk, size=n)
        p = np.clip(p, pk * 1e-6, None)
    return Spectrum(f, 10.0 * np.log10(p) + offset_db, kind)


def synthetic_ringdown(tau, amplitude=1.0, offset=0.0, n=2000, span_taus=8.0,
                       pre=0, noise=0.0, rng=None, f0=None):
    """Exponential decay sampled over ``span_taus`` decay times.

    ``pre`` samples of baseline (at ``offset``) precede the pulse maximum.
    ``noise`` is additive Gaussian RMS relative to ``amplitude``.
    """
    dt = span_taus * tau / (n - 1)
    t = np.arange(n + pre) * dt
    v = np.full(t.shape, offset, dtype=float)
    v[pre:] += amplitude * np.exp(-(t[pre:] - t[pre]) / tau)
    if noise:
        rng = np.random.default_rng(rng)
        v = v + rng.normal(0.0, noise * amplitude, size=v.shape)
    return RingdownTrace(t, v, f0)

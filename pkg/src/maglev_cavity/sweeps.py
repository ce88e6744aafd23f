"""Parameter studies of the levitation equilibrium.

Each sweep reuses one :class:`~maglev_cavity.levitation.LevitationConfig`:
the supercurrent is never re-calibrated per point, so rows stay comparable.
"""

from dataclasses import dataclass, replace
import math

from .exceptions import DomainError
from .levitation import LevitationConfig, find_equilibrium
from .magnet import MagnetSpec

SWEEP_KINDS = ("gap", "remanence", "orientation", "size")


@dataclass(frozen=True)
class SweepResult:
    parameter: str
    values: tuple
    results: tuple

    def __len__(self):
        return len(self.results)

    def rows(self):
        for v, r in zip(self.values, self.results):
            yield v, r

    def x_min(self):
        return [r.position.x for r in self.results]

    def z_min(self):
        return [r.position.z for r in self.results]

    def labels(self):
        return [r.label for r in self.results]

    def to_csv(self, fh):
        fh.write("param,x_min_m,z_min_m,U_min_J,label\n")
        for v, r in self.rows():
            if isinstance(v, tuple):
                v = ":".join(f"{c:.9g}" for c in v)
            else:
                v = f"{v:.9g}"
            fh.write(f"{v},{r.position.x:.9e},{r.position.z:.9e},"
                     f"{r.energy:.12e},{r.label}\n")


def gap_sweep(magnet, geom, cfg, gaps, options=None):
    """Equilibria for each stub-to-wall gap; ``r_s`` stays fixed."""
    values, results = [], []
    for gap in sorted(gaps):
        if not gap > 0:
            raise DomainError("gap values must be positive")
        g = replace(geom, r_c=geom.r_s + gap)
        c = replace(cfg, wall_distance=g.r_c)
        values.append(float(gap))
        results.append(find_equilibrium(magnet, g, c, options))
    return SweepResult("gap_m", tuple(values), tuple(results))


def remanence_sweep(magnet, geom, cfg, remanences, polarization="axial",
                    options=None):
    """Equilibria for each remanence at fixed geometry and supercurrent."""
    values, results = [], []
    for Br in sorted(remanences):
        if not Br >= 0:
            raise DomainError("remanence values must be non-negative")
        mag = replace(magnet, remanence=float(Br), grade=None,
                      polarization=polarization)
        values.append(float(Br))
        results.append(find_equilibrium(mag, geom, cfg, options))
    return SweepResult("remanence_T", tuple(values), tuple(results))


def orientation_sweep(magnet, geom, cfg, angles, options=None):
    """Equilibria for each tilt angle in ``[0, pi/2]``."""
    values, results = [], []
    for th in sorted(angles):
        if not 0.0 <= th <= math.pi / 2 + 1e-12:
            raise DomainError("orientation must lie in [0, pi/2]")
        mag = replace(magnet, orientation=min(float(th), math.pi / 2))
        values.append(float(th))
        results.append(find_equilibrium(mag, geom, cfg, options))
    return SweepResult("theta_rad", tuple(values), tuple(results))


def size_sweep(geom, cfg, radii, thicknesses, remanence=1.47, density=None,
               options=None):
    """Equilibria for each ``(radius, full thickness)`` pair."""
    extra = {} if density is None else {"density": density}
    values, results = [], []
    for R in sorted(radii):
        for t in sorted(thicknesses):
            if not (R > 0 and t > 0):
                raise DomainError("magnet dimensions must be positive")
            mag = MagnetSpec(radius=float(R), half_thickness=0.5 * float(t),
                             remanence=remanence, **extra)
            values.append((float(R), float(t)))
            results.append(find_equilibrium(mag, geom, cfg, options))
    return SweepResult("radius_m:thickness_m", tuple(values), tuple(results))


def run_sweep(kind, magnet, geom, cfg, values, **kwargs):
    if kind == "gap":
        return gap_sweep(magnet, geom, cfg, values, **kwargs)
    if kind == "remanence":
        return remanence_sweep(magnet, geom, cfg, values, **kwargs)
    if kind == "orientation":
        return orientation_sweep(magnet, geom, cfg, values, **kwargs)
    if kind == "size":
        radii, thicknesses = values
        return size_sweep(geom, cfg, radii, thicknesses, **kwargs)
    raise DomainError(f"unknown sweep kind {kind!r}; expected one of {SWEEP_KINDS}")

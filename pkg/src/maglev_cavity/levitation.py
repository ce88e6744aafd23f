"""Hybrid potential-energy model of a magnet levitating in the cavity.

The total energy is the sum of three terms:

* a two-loop term, the magnet moment in the field of a response
  supercurrent ``I`` circulating on the stub rim (radius ``r_s``),
* a mirror term, the magnet interacting with its image in the cavity wall
  at radial coordinate ``d``,
* gravity, ``M g z``.

Coordinates: ``x`` is the radial distance of the magnet centre from the stub
axis, ``z`` its height above the stub surface. The landscape is computed on
the half plane ``x >= 0``; the stub axis ``x = 0`` is a symmetry line, not a
boundary.
"""

from dataclasses import dataclass, field, replace
import math

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .constants import G, MU0
from .elliptic import elliptic_E, elliptic_K
from .exceptions import DomainError
from .magnet import dipole_moment, mass

STABLE_ON_STUB = "stable_on_stub"
FALLS_INTO_GAP = "falls_into_gap"
NO_LEVITATED_MINIMUM = "no_levitated_minimum"

# Grid nodes this close to the wall or the stub surface are not evaluated.
EXCLUSION = 10e-6

# A moment lying in the stub plane couples half as strongly to its image
# as one normal to it.
RADIAL_IMAGE_COUPLING = 0.5


@dataclass(frozen=True)
class Position:
    """Magnet centre ``(x, z)``; ``theta`` overrides the magnet's own tilt."""

    x: float
    z: float
    theta: float | None = None


@dataclass(frozen=True)
class LevitationConfig:
    """Response supercurrent ``current`` (A) and wall coordinate (m)."""

    current: float
    wall_distance: float

    def __post_init__(self):
        if not self.current >= 0:
            raise DomainError("supercurrent must be non-negative")
        if not self.wall_distance > 0:
            raise DomainError("wall distance must be positive")

    @classmethod
    def default(cls, magnet, geom):
        """Image-moment-equivalent loop current ``m / (pi r_s^2)``."""
        current = dipole_moment(magnet) / (math.pi * geom.r_s ** 2)
        return cls(current=current, wall_distance=geom.r_c)


def image_coupling(magnet):
    return RADIAL_IMAGE_COUPLING if magnet.polarization == "radial" else 1.0


def _mirror_angle(magnet, theta):
    return math.pi / 2 if magnet.polarization == "radial" else theta


def loop_field_kernel(r, h, loop_radius):
    """Axial field of a unit-current loop divided by ``mu0``.

    ``B_z = mu0 I * loop_field_kernel(r, h, R)`` at radial offset ``r`` and
    height ``h`` from a loop of radius ``R``. Vectorized; ``h`` must be > 0.
    """
    r = np.asarray(r, dtype=float)
    h = np.asarray(h, dtype=float)
    R = loop_radius
    outer = (R + r) ** 2 + h ** 2
    inner = (R - r) ** 2 + h ** 2
    k = np.sqrt(np.clip(4.0 * R * r / outer, 0.0, 1.0))
    bracket = (R * R - r * r - h * h) / inner * elliptic_E(k) + elliptic_K(k)
    return bracket / (2.0 * np.pi * np.sqrt(outer))


def _two_loop(moment, current, R, x, z, coupling=1.0):
    z = np.asarray(z, dtype=float)
    if np.any(z <= 0):
        raise DomainError("two-loop energy needs h > 0 (singular on the rim at h = 0)")
    return coupling * MU0 * current * moment * loop_field_kernel(x, z, R)


def _mirror(moment, d, x, theta):
    x = np.asarray(x, dtype=float)
    if np.any(x >= d):
        raise DomainError("mirror energy diverges at the wall (x >= d)")
    return MU0 * moment ** 2 * (1.0 + np.sin(theta) ** 2) / (64.0 * np.pi * (d - x) ** 3)


def two_loop_energy(magnet, geom, pos, cfg):
    """Energy (J) of the magnet moment in the rim supercurrent's field."""
    U = _two_loop(dipole_moment(magnet), cfg.current, geom.r_s, pos.x, pos.z,
                  image_coupling(magnet))
    return float(U)


def mirror_energy(magnet, pos, cfg):
    """Wall image energy ``mu0 m^2 (1 + sin^2 theta) / (64 pi (d - x)^3)``."""
    theta = magnet.orientation if pos.theta is None else pos.theta
    theta = _mirror_angle(magnet, theta)
    return float(_mirror(dipole_moment(magnet), cfg.wall_distance, pos.x, theta))


def gravitational_energy(magnet, pos):
    return mass(magnet) * G * pos.z


def total_energy(magnet, geom, pos, cfg):
    return (two_loop_energy(magnet, geom, pos, cfg)
            + mirror_energy(magnet, pos, cfg)
            + gravitational_energy(magnet, pos))


def energy_field(magnet, geom, cfg, x, z, theta=None):
    """Vectorized total energy at broadcastable ``x``, ``z`` arrays."""
    if theta is None:
        theta = magnet.orientation
    m = dipole_moment(magnet)
    x, z = np.broadcast_arrays(np.asarray(x, float), np.asarray(z, float))
    return (_two_loop(m, cfg.current, geom.r_s, x, z, image_coupling(magnet))
            + _mirror(m, cfg.wall_distance, x, _mirror_angle(magnet, theta))
            + mass(magnet) * G * z)


@dataclass
class EnergyLandscape:
    """Total energy on a rectangular ``(x, z)`` grid.

    ``U[i, j]`` is the energy at ``(x[i], z[j])``; excluded nodes hold NaN.
    """

    x: np.ndarray
    z: np.ndarray
    U: np.ndarray
    excluded: np.ndarray

    @property
    def dx(self):
        return float(self.x[1] - self.x[0]) if self.x.size > 1 else 0.0

    @property
    def dz(self):
        return float(self.z[1] - self.z[0]) if self.z.size > 1 else 0.0

    def interior_minima(self):
        """Grid nodes strictly below all eight neighbours.

        The first column is treated as the symmetry axis, mirrored onto
        itself. Nodes on the outer grid boundary, or touching an excluded
        node, never qualify. Returns index pairs sorted by energy.
        """
        U = np.where(self.excluded, np.inf, self.U)
        nx, nz = U.shape
        if nx < 2 or nz < 3:
            return []
        padded = np.vstack([U[1:2], U])  # mirror column x = -dx
        centre = padded[1:-1, 1:-1]
        ok = np.isfinite(centre)
        for di in (-1, 0, 1):
            for dj in (-1, 0, 1):
                if di == 0 and dj == 0:
                    continue
                nb = padded[1 + di:nx + di, 1 + dj:nz - 1 + dj]
                ok &= np.isfinite(nb) & (centre < nb)
        if not self.x[0] == 0.0:
            ok[0, :] = False
        idx = [(int(i), int(j) + 1) for i, j in np.argwhere(ok)]
        return sorted(idx, key=lambda ij: U[ij])

    def to_gridfile(self, fh):
        # Plot-tool block format: "x z U" per line, blank line between x blocks.
        for i, xv in enumerate(self.x):
            for j, zv in enumerate(self.z):
                u = self.U[i, j]
                fh.write(f"{xv:.9e} {zv:.9e} {'nan' if np.isnan(u) else format(u, '.12e')}\n")
            fh.write("\n")

    def to_csv(self, fh):
        fh.write("x_m,z_m,U_J\n")
        for i, xv in enumerate(self.x):
            for j, zv in enumerate(self.z):
                u = self.U[i, j]
                fh.write(f"{xv:.9e},{zv:.9e},{'nan' if np.isnan(u) else format(u, '.12e')}\n")


def default_grid(geom, nx=200, nz=200, z_max=5e-3, cfg=None):
    """``x`` in ``[0, d)`` and ``z`` in ``(0, z_max]`` with uniform spacing."""
    if nx < 1 or nz < 1:
        raise DomainError("empty grid")
    d = geom.r_c if cfg is None else cfg.wall_distance
    x = np.linspace(0.0, d, nx, endpoint=False)
    z = np.linspace(z_max / nz, z_max, nz)
    return x, z


def energy_landscape(magnet, geom, cfg, x, z, theta=None):
    """Evaluate the total energy on the grid ``x`` by ``z``."""
    x = np.asarray(x, dtype=float).ravel()
    z = np.asarray(z, dtype=float).ravel()
    if x.size == 0 or z.size == 0:
        raise DomainError("empty grid")
    if np.any(np.diff(x) <= 0) or np.any(np.diff(z) <= 0):
        raise DomainError("grid axes must be strictly increasing")
    if x[0] < 0:
        raise DomainError("grid must satisfy x >= 0")
    X, Z = np.meshgrid(x, z, indexing="ij")
    excluded = (X > cfg.wall_distance - EXCLUSION) | (Z < EXCLUSION)
    U = np.full(X.shape, np.nan)
    ok = ~excluded
    if np.any(ok):
        U[ok] = energy_field(magnet, geom, cfg, X[ok], Z[ok], theta)
    return EnergyLandscape(x=x, z=z, U=U, excluded=excluded)


@dataclass(frozen=True)
class EquilibriumOptions:
    nx: int = 120
    nz: int = 120
    z_max: float = 10e-3
    min_step: float = 1e-6
    min_delta_u: float = 1e-15
    max_iter: int = 10_000
    polish: bool = True


@dataclass(frozen=True)
class EquilibriumResult:
    position: Position
    energy: float
    label: str
    hessian_diag: tuple = field(default=(math.nan, math.nan))

    @property
    def levitated(self):
        return self.label != NO_LEVITATED_MINIMUM


def stability_label(x, geom):
    return STABLE_ON_STUB if x <= geom.r_s else FALLS_INTO_GAP


def _coordinate_descent(f, x0, z0, step, lo, hi, opts):
    # Compass search; lo/hi are per-axis bounds.
    p = [x0, z0]
    u = f(*p)
    it = 0
    while step >= opts.min_step and it < opts.max_iter:
        it += 1
        moved = False
        for axis in (0, 1):
            for sign in (1.0, -1.0):
                q = list(p)
                q[axis] = min(max(p[axis] + sign * step, lo[axis]), hi[axis])
                if q == p:
                    continue
                uq = f(*q)
                if uq < u:
                    du = u - uq
                    p, u, moved = q, uq, True
                    if du < opts.min_delta_u:
                        return p, u
                    break
        if not moved:
            step *= 0.5
    return p, u


def _polish(f, p, width, lo, hi):
    # Alternating bounded Brent line searches: pushes the stationary point
    # well below the compass-search resolution.
    p = list(p)
    for _ in range(6):
        prev = list(p)
        for axis in (0, 1):
            a = max(lo[axis], p[axis] - width)
            b = min(hi[axis], p[axis] + width)
            if b <= a:
                continue

            def g(v, axis=axis):
                q = list(p)
                q[axis] = v
                return f(*q)

            res = minimize_scalar(g, bounds=(a, b), method="bounded",
                                  options={"xatol": 1e-11})
            if res.fun <= g(p[axis]):
                p[axis] = float(res.x)
        if max(abs(p[0] - prev[0]), abs(p[1] - prev[1])) < 1e-11:
            break
        width = max(width * 0.25, 1e-8)
    return p


def find_equilibrium(magnet, geom, cfg, options=None):
    """Locate the levitated energy minimum.

    A coarse grid scan picks the lowest interior local minimum, which is then
    refined by compass search with a halving step and a final line-search
    polish. A landscape without interior minima (e.g. gravity only) yields
    the ``no_levitated_minimum`` label rather than an error.
    """
    opts = options or EquilibriumOptions()
    theta = magnet.orientation
    x, z = default_grid(geom, opts.nx, opts.nz, opts.z_max, cfg)
    land = energy_landscape(magnet, geom, cfg, x, z, theta)
    minima = land.interior_minima()
    if not minima:
        U = np.where(land.excluded, np.inf, land.U)
        i, j = np.unravel_index(np.argmin(U), U.shape)
        return EquilibriumResult(Position(float(x[i]), float(z[j]), theta),
                                 float(U[i, j]), NO_LEVITATED_MINIMUM)

    def f(xv, zv):
        return float(energy_field(magnet, geom, cfg, xv, zv, theta))

    lo = (0.0, EXCLUSION)
    hi = (cfg.wall_distance - EXCLUSION, opts.z_max)
    i, j = minima[0]
    step = max(land.dx, land.dz)
    p, _ = _coordinate_descent(f, float(x[i]), float(z[j]), step, lo, hi, opts)
    if opts.polish:
        p = _polish(f, p, 2.0 * opts.min_step, lo, hi)
    u = f(*p)
    if p[1] <= lo[1] or p[1] >= hi[1]:
        return EquilibriumResult(Position(p[0], p[1], theta), u, NO_LEVITATED_MINIMUM)
    return EquilibriumResult(Position(p[0], p[1], theta), u,
                             stability_label(p[0], geom),
                             _hessian_diag(f, p, lo, hi))


def _hessian_diag(f, p, lo, hi, h=1e-6):
    u0 = f(*p)
    out = []
    for axis in (0, 1):
        a, b = list(p), list(p)
        a[axis] -= h
        b[axis] += h
        if a[axis] < lo[axis]:
            a[axis] = 2 * p[axis] - b[axis]  # reflect across the axis
            a[axis] = abs(a[axis])
        if b[axis] > hi[axis]:
            out.append(math.nan)
            continue
        out.append((f(*a) - 2 * u0 + f(*b)) / h ** 2)
    return tuple(out)


def calibrate_current(magnet, geom, cfg, target_height, options=None):
    """Rescale the supercurrent so the equilibrium height equals ``target_height``.

    Returns a new :class:`LevitationConfig`. Raises :class:`DomainError` if no
    current in ``[1e-6, 1e6] x cfg.current`` brackets the target.
    """
    opts = options or EquilibriumOptions()
    if not 0 < target_height < opts.z_max:
        raise DomainError("target height outside the search window")
    base = cfg.current if cfg.current > 0 else LevitationConfig.default(magnet, geom).current

    def err(log_scale):
        c = replace(cfg, current=base * math.exp(log_scale))
        res = find_equilibrium(magnet, geom, c, opts)
        if res.levitated:
            return res.position.z - target_height
        # Without a levitated minimum the magnet either rests on the surface
        # (current too weak) or sits on the upper search bound (too strong).
        return (opts.z_max if res.position.z > 0.5 * opts.z_max else 0.0) - target_height

    grid = np.linspace(-14.0, 14.0, 57)
    vals = [err(s) for s in grid]
    for a, b, fa, fb in zip(grid[:-1], grid[1:], vals[:-1], vals[1:]):
        if fa == 0:
            return replace(cfg, current=base * math.exp(a))
        if fa < 0 < fb:
            s = brentq(err, a, b, xtol=1e-12, rtol=1e-12)
            return replace(cfg, current=base * math.exp(s))
    raise DomainError("could not bracket the calibration current")

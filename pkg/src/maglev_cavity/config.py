"""Run configuration: a JSON file in user units, resolved to SI once.

Every field is optional. User-facing units are millimetres, gigahertz,
tesla, degrees and megahertz; :func:`resolve` converts them to the SI
objects the library works with.
"""

from dataclasses import dataclass
import copy
import json
import math

from .cavity import DEFAULT_K_LEV, DEFAULT_SHIFT_A, CavityGeometry, ShiftModel
from .classify import Thresholds
from .exceptions import ConfigError, MaglevError
from .levitation import EquilibriumOptions, LevitationConfig
from .magnet import MagnetSpec, grade_remanence

DEFAULTS = {
    "magnet": {
        "grade": "N50",
        "remanence_t": None,
        "radius_mm": 0.5,
        "thickness_mm": 0.5,
        "density_kg_m3": 7.4e3,
        "orientation_deg": 0.0,
        "polarization": "axial",
    },
    "cavity": {
        "r_c_mm": 5.0,
        "r_s_mm": 2.0,
        "h_s_mm": 7.5,
        "depth_mm": 12.5,
        "f0_ghz": 10.04,
    },
    "levitation": {
        "current_a": None,
        "calibrate": True,
        "calibrate_height_mm": 2.1,
        "nx": 200,
        "nz": 200,
        "z_max_mm": 10.0,
    },
    "model": {
        "A": DEFAULT_SHIFT_A,
        "k_lev": DEFAULT_K_LEV,
        "thresholds_mhz": {"place": 50.0, "tilt": 30.0, "noise": 5.0, "up": 10.0},
    },
    "output": {
        "directory": ".",
        "formats": ["csv"],
    },
}


def _merge(base, override, path=""):
    out = copy.deepcopy(base)
    if not isinstance(override, dict):
        raise ConfigError(f"{path or 'config'}: expected an object")
    for key, value in override.items():
        where = f"{path}.{key}" if path else key
        if key not in base:
            raise ConfigError(f"unknown config key {where!r}")
        if isinstance(base[key], dict):
            out[key] = _merge(base[key], value, where)
        else:
            out[key] = value
    return out


def resolved_dict(data=None):
    """Defaults overlaid with ``data`` (user units, not yet converted)."""
    return _merge(DEFAULTS, data or {})


def load_config(path):
    """Read a JSON config file. Raises ``OSError`` or :class:`ConfigError`."""
    with open(path) as fh:
        text = fh.read()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from None
    return resolve(data)


@dataclass(frozen=True)
class RunConfig:
    """Fully resolved run settings in SI units."""

    magnet: MagnetSpec
    geometry: CavityGeometry
    current: float | None
    calibrate_height: float | None
    options: EquilibriumOptions
    shift_A: float
    k_lev: float
    thresholds: Thresholds
    output_directory: str
    output_formats: tuple
    raw: dict

    def shift_model(self):
        return ShiftModel.from_geometry(self.geometry, self.shift_A)

    def levitation_config(self):
        """Supercurrent from the override, else the moment-equivalent default.

        Calibration to a target height is done separately by the caller.
        """
        base = LevitationConfig.default(self.magnet, self.geometry)
        if self.current is not None:
            return LevitationConfig(self.current, base.wall_distance)
        return base

    def to_json(self):
        return json.dumps(self.raw, indent=2, sort_keys=True)


def _num(section, key, positive=False, allow_none=False):
    v = section[key]
    if v is None and allow_none:
        return None
    if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
        raise ConfigError(f"{key}: expected a finite number, got {v!r}")
    if positive and not v > 0:
        raise ConfigError(f"{key}: must be positive")
    return float(v)


def resolve(data=None):
    """Convert a user-unit config mapping into a :class:`RunConfig`."""
    raw = resolved_dict(data)
    m, c, lev, mod, out = (raw[k] for k in ("magnet", "cavity", "levitation", "model", "output"))
    mm, ghz, mhz = 1e-3, 1e9, 1e6
    try:
        grade = m["grade"]
        remanence = _num(m, "remanence_t", allow_none=True)
        if remanence is None:
            if grade is None:
                raise ConfigError("magnet: give a grade or remanence_t")
            remanence = grade_remanence(grade)
        elif grade is not None and not math.isclose(remanence, grade_remanence(grade)):
            # An explicit remanence overrides the grade label.
            grade = None
        magnet = MagnetSpec(
            radius=_num(m, "radius_mm", True) * mm,
            half_thickness=_num(m, "thickness_mm", True) * mm / 2,
            remanence=remanence,
            density=_num(m, "density_kg_m3", True),
            orientation=math.radians(_num(m, "orientation_deg")),
            grade=grade.upper() if grade else None,
            polarization=m["polarization"],
        )
        geom = CavityGeometry(
            r_c=_num(c, "r_c_mm", True) * mm,
            r_s=_num(c, "r_s_mm", True) * mm,
            h_s=_num(c, "h_s_mm", True) * mm,
            depth=_num(c, "depth_mm", True) * mm,
            f0=_num(c, "f0_ghz", True) * ghz,
        )
        current = _num(lev, "current_a", allow_none=True)
        height = _num(lev, "calibrate_height_mm", True, allow_none=True)
        if not isinstance(lev["calibrate"], bool):
            raise ConfigError("calibrate: expected true or false")
        if current is not None or not lev["calibrate"]:
            height = None
        elif height is not None:
            height *= mm
        for key in ("nx", "nz"):
            if not isinstance(lev[key], int) or isinstance(lev[key], bool) or lev[key] < 3:
                raise ConfigError(f"{key}: expected an integer >= 3")
        options = EquilibriumOptions(nx=lev["nx"], nz=lev["nz"],
                                     z_max=_num(lev, "z_max_mm", True) * mm)
        th = _merge(DEFAULTS["model"]["thresholds_mhz"], mod["thresholds_mhz"],
                    "model.thresholds_mhz")
        thresholds = Thresholds(**{k: _num(th, k, True) * mhz for k in th})
        formats = out["formats"]
        if isinstance(formats, str):
            formats = [formats]
        if not isinstance(out["directory"], str):
            raise ConfigError("output.directory: expected a string")
        return RunConfig(
            magnet=magnet, geometry=geom, current=current,
            calibrate_height=height, options=options,
            shift_A=_num(mod, "A"), k_lev=_num(mod, "k_lev", True),
            thresholds=thresholds, output_directory=out["directory"],
            output_formats=tuple(formats), raw=raw,
        )
    except ConfigError:
        raise
    except (MaglevError, TypeError, KeyError, AttributeError) as exc:
        raise ConfigError(str(exc)) from None

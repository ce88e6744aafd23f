"""Command-line front end.

Exit codes: 0 success, 1 I/O failure, 2 configuration or usage error,
3 numeric or fit failure. Data goes to standard output or files; messages
go to standard error.
"""

import argparse
import json
import math
import os
import sys

import numpy as np

from . import __version__
from .classify import CONTEXTS, classify_event
from .config import load_config, resolve
from .exceptions import ConfigError, MaglevError, SpectrumError
from .levitation import (calibrate_current, default_grid, energy_landscape,
                         find_equilibrium)
from .magnet import axial_field
from .spectra import (QREPORT_CSV_HEADER, analyze_ringdown, analyze_spectrum,
                      coupling_from_powers, load_ringdown, load_spectrum)
from .sweeps import SWEEP_KINDS, run_sweep

EXIT_OK, EXIT_IO, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3


class UsageError(Exception):
    """Bad command-line values (exit code 2)."""


class InputError(Exception):
    """Unreadable input data (exit code 1)."""


def _arange_inclusive(start, stop, step):
    if step is None or step <= 0:
        raise UsageError("step must be positive")
    if stop < start:
        raise UsageError("empty range: stop < start")
    n = int(math.floor((stop - start) / step + 1e-9)) + 1
    return start + step * np.arange(n)


def _run_config(args):
    if args.config:
        return load_config(args.config)
    return resolve()


def _calibrated(rc):
    cfg = rc.levitation_config()
    if rc.calibrate_height is not None:
        cfg = calibrate_current(rc.magnet, rc.geometry, cfg, rc.calibrate_height,
                                rc.options)
    return cfg


def _emit(text, path):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="\n") as fh:
            fh.write(text)


def _report_text(report, fmt):
    if fmt == "csv":
        return QREPORT_CSV_HEADER + "\n" + report.to_csv_line() + "\n"
    return report.to_json() + "\n"


def cmd_field(args):
    rc = _run_config(args)
    if args.points is not None and args.points < 1:
        raise UsageError("points must be >= 1")
    if args.stop < args.start:
        raise UsageError("empty range: stop < start")
    if args.start == args.stop or args.points == 1:
        z_mm = np.array([args.start])
    elif args.points is not None:
        z_mm = np.linspace(args.start, args.stop, args.points)
    else:
        z_mm = _arange_inclusive(args.start, args.stop, args.step)
    Z = z_mm * 1e-3
    if args.from_surface:
        Z = Z + rc.magnet.half_thickness
    B = axial_field(rc.magnet, Z)
    lines = ["Z_m,B_T"] + [f"{zv:.9e},{bv:.12e}" for zv, bv in zip(Z, np.atleast_1d(B))]
    _emit("\n".join(lines) + "\n", args.output)


def _equilibrium_dict(res, cfg):
    return {
        "label": res.label,
        "x_mm": res.position.x * 1e3,
        "z_mm": res.position.z * 1e3,
        "energy_j": res.energy,
        "current_a": cfg.current,
    }


def cmd_landscape(args):
    rc = _run_config(args)
    cfg = _calibrated(rc)
    res = find_equilibrium(rc.magnet, rc.geometry, cfg, rc.options)
    x, z = default_grid(rc.geometry, rc.options.nx, rc.options.nz,
                        rc.options.z_max, cfg)
    land = energy_landscape(rc.magnet, rc.geometry, cfg, x, z)
    outdir = args.output_dir or rc.output_directory
    os.makedirs(outdir, exist_ok=True)
    with open(os.path.join(outdir, "landscape.dat"), "w", newline="\n") as fh:
        land.to_gridfile(fh)
    if "csv" in rc.output_formats:
        with open(os.path.join(outdir, "landscape.csv"), "w", newline="\n") as fh:
            land.to_csv(fh)
    sys.stdout.write(json.dumps(_equilibrium_dict(res, cfg), indent=2, sort_keys=True) + "\n")


# CLI sweep ranges are in user units; these convert to SI.
_SWEEP_UNITS = {"gap": 1e-3, "remanence": 1.0, "orientation": math.pi / 180, "size": 1e-3}


def cmd_sweep(args):
    if args.kind not in SWEEP_KINDS:
        raise UsageError(f"unknown sweep kind {args.kind!r}")
    rc = _run_config(args)
    cfg = _calibrated(rc)
    values = _arange_inclusive(args.start, args.stop, args.step) * _SWEEP_UNITS[args.kind]
    kwargs = {"options": rc.options}
    if args.kind == "size":
        t = (args.thickness if args.thickness is not None
             else rc.magnet.thickness * 1e3) * 1e-3
        values = (values, [t])
        kwargs.update(remanence=rc.magnet.remanence, density=rc.magnet.density)
    elif args.kind == "orientation" and values[-1] > math.pi / 2 + 1e-12:
        raise UsageError("orientation range must lie within 0-90 deg")
    result = run_sweep(args.kind, rc.magnet, rc.geometry, cfg, list(values), **kwargs)
    target = args.output
    if target in (None, "-"):
        result.to_csv(sys.stdout)
    else:
        with open(target, "w", newline="\n") as fh:
            result.to_csv(fh)


def cmd_qfit(args):
    try:
        s = load_spectrum(args.spectrum, kind=args.kind)
    except SpectrumError as exc:
        raise InputError(str(exc)) from None
    report = analyze_spectrum(s, args.method, args.beta1, args.beta2)
    _emit(_report_text(report, args.format), args.output)


def cmd_ringdown(args):
    if (args.pf is None) != (args.pe is None):
        raise UsageError("--pf and --pe must be given together")
    try:
        trace = load_ringdown(args.trace)
    except SpectrumError as exc:
        raise InputError(str(exc)) from None
    beta = args.beta
    if args.pf is not None:
        beta = coupling_from_powers(args.pf, args.pe, literal=args.literal_coupling)
    report = analyze_ringdown(trace, f0=args.f0 * 1e9, beta=beta)
    _emit(_report_text(report, args.format), args.output)


def cmd_classify(args):
    rc = _run_config(args)
    contact = True if args.contact else (False if args.lift else None)
    label = classify_event(args.bare * 1e9, args.before * 1e9, args.after * 1e9,
                           context=args.context, contact=contact,
                           thresholds=rc.thresholds)
    sys.stdout.write(label + "\n")


def cmd_print_config(args):
    rc = _run_config(args)
    sys.stdout.write(rc.to_json() + "\n")


def build_parser():
    p = argparse.ArgumentParser(
        prog="maglev-cavity",
        description="Levitated-magnet cavity models and resonance analysis.")
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("--config", help="JSON run configuration (user units)")
    p.add_argument("--print-config", action="store_true",
                   help="print the resolved configuration and exit")
    sub = p.add_subparsers(dest="command")

    def add(name, func, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--config", default=argparse.SUPPRESS,
                        help="JSON run configuration (user units)")
        sp.set_defaults(func=func)
        return sp

    sp = add("field", cmd_field, "on-axis field of the magnet")
    sp.add_argument("--start", type=float, default=0.0, help="first Z in mm")
    sp.add_argument("--stop", type=float, default=4.0, help="last Z in mm")
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--step", type=float, default=0.05, help="Z step in mm")
    g.add_argument("--points", type=int, help="number of evenly spaced points")
    sp.add_argument("--from-surface", action="store_true",
                    help="measure Z from the magnet face instead of its centre")
    sp.add_argument("-o", "--output", help="output CSV (default stdout)")

    sp = add("landscape", cmd_landscape, "energy landscape and equilibrium")
    sp.add_argument("--output-dir", help="directory for landscape.dat / landscape.csv")

    sp = add("sweep", cmd_sweep, "parameter sweep of the equilibrium")
    sp.add_argument("kind", choices=SWEEP_KINDS)
    sp.add_argument("--start", type=float, required=True)
    sp.add_argument("--stop", type=float, required=True)
    sp.add_argument("--step", type=float, required=True,
                    help="units: gap mm, remanence T, orientation deg, size mm (radius)")
    sp.add_argument("--thickness", type=float,
                    help="magnet thickness in mm for size sweeps")
    sp.add_argument("-o", "--output", help="output CSV (default stdout)")

    sp = add("qfit", cmd_qfit, "resonance frequency and Q from a spectrum")
    sp.add_argument("spectrum", help="CSV with frequency_hz,amplitude_db")
    sp.add_argument("--kind", choices=("S21", "S11"))
    sp.add_argument("--method", choices=("three_dB", "lorentzian"), default="three_dB")
    sp.add_argument("--beta1", type=float, default=0.0)
    sp.add_argument("--beta2", type=float)
    sp.add_argument("--format", choices=("json", "csv"), default="json")
    sp.add_argument("-o", "--output")

    sp = add("ringdown", cmd_ringdown, "intrinsic Q from a ring-down trace")
    sp.add_argument("trace", help="CSV with time_s,voltage_v")
    sp.add_argument("--f0", type=float, required=True, help="resonance frequency in GHz")
    sp.add_argument("--beta", type=float, default=0.0)
    sp.add_argument("--pf", type=float, help="forward peak power (W)")
    sp.add_argument("--pe", type=float, help="emitted peak power (W)")
    sp.add_argument("--literal-coupling", action="store_true",
                    help="use the 1 / (2 sqrt(Pf/Pe - 1)) coupling form")
    sp.add_argument("--format", choices=("json", "csv"), default="json")
    sp.add_argument("-o", "--output")

    sp = add("classify", cmd_classify, "classify a frequency-shift event")
    sp.add_argument("--bare", type=float, required=True, help="bare-cavity frequency, GHz")
    sp.add_argument("--before", type=float, required=True, help="GHz")
    sp.add_argument("--after", type=float, required=True, help="GHz")
    sp.add_argument("--context", choices=CONTEXTS, default="on_stub")
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--contact", action="store_true", help="magnet stays in contact")
    g.add_argument("--lift", action="store_true", help="magnet is known to lift off")

    add("print-config", cmd_print_config, "print the resolved configuration")
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.print_config:
        args.func = cmd_print_config
    elif args.command is None:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    try:
        args.func(args)
    except (UsageError, ConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (InputError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (MaglevError, ArithmeticError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

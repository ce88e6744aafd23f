import json
import math

import numpy as np
import pytest

from maglev_cavity.cli import main
from maglev_cavity.config import resolve
from maglev_cavity.levitation import calibrate_current, find_equilibrium
from maglev_cavity.spectra import (synthetic_ringdown, synthetic_spectrum,
                                   write_ringdown, write_spectrum)

COARSE = {"levitation": {"nx": 60, "nz": 60}}


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def coarse_config(tmp_path):
    path = tmp_path / "coarse.json"
    path.write_text(json.dumps(COARSE))
    return path


@pytest.fixture
def fig27_file(tmp_path):
    path = tmp_path / "fig27.csv"
    with open(path, "w") as fh:
        write_spectrum(synthetic_spectrum(10.039e9, 5e6, 60e6, n=1201), fh)
    return path


def test_field_column_decreases(capsys):
    code, out, _ = run(capsys, "field", "--start", 0, "--stop", 4)
    assert code == 0
    rows = np.loadtxt(out.splitlines()[1:], delimiter=",")
    assert rows.shape == (81, 2)
    assert np.all(np.diff(rows[:, 1]) < 0)


def test_field_ranges(capsys):
    code, _, err = run(capsys, "field", "--start", 2, "--stop", 1)
    assert code == 2 and "empty range" in err
    code, out, _ = run(capsys, "field", "--start", 1, "--stop", 1)
    assert code == 0 and len(out.splitlines()) == 2


def test_field_from_surface(capsys):
    _, out, _ = run(capsys, "field", "--start", 0, "--stop", 0, "--from-surface")
    assert float(out.splitlines()[1].split(",")[1]) == pytest.approx(0.509, abs=1e-3)


def test_landscape_matches_library(capsys, tmp_path, coarse_config):
    code, out, _ = run(capsys, "--config", coarse_config, "landscape",
                       "--output-dir", tmp_path / "out")
    assert code == 0
    got = json.loads(out)
    rc = resolve(COARSE)
    cfg = calibrate_current(rc.magnet, rc.geometry, rc.levitation_config(),
                            rc.calibrate_height, rc.options)
    res = find_equilibrium(rc.magnet, rc.geometry, cfg, rc.options)
    assert got["label"] == res.label
    assert got["z_mm"] == pytest.approx(res.position.z * 1e3)
    assert (tmp_path / "out" / "landscape.dat").exists()
    assert (tmp_path / "out" / "landscape.csv").read_text().startswith("x_m,z_m,U_J\n")


def test_landscape_small_gap(capsys, tmp_path):
    path = tmp_path / "gap2.json"
    path.write_text(json.dumps({**COARSE, "cavity": {"r_c_mm": 4.0}}))
    code, out, _ = run(capsys, "--config", path, "landscape", "--output-dir", tmp_path)
    assert code == 0
    assert json.loads(out)["label"] == "stable_on_stub"


def test_landscape_is_deterministic(capsys, tmp_path, coarse_config):
    outputs = []
    for name in ("a", "b"):
        _, out, _ = run(capsys, "--config", coarse_config, "landscape",
                        "--output-dir", tmp_path / name)
        outputs.append((out, (tmp_path / name / "landscape.dat").read_bytes()))
    assert outputs[0] == outputs[1]


@pytest.mark.parametrize("text", ["{not json", '{"magnet": {"colour": 1}}',
                                  '{"magnet": {"grade": "N99"}}',
                                  '{"cavity": {"r_c_mm": 1.0}}'])
def test_bad_config_exit_2(capsys, tmp_path, text):
    path = tmp_path / "bad.json"
    path.write_text(text)
    code, out, err = run(capsys, "--config", path, "landscape", "--output-dir", tmp_path)
    assert code == 2 and out == "" and err.startswith("error:")


def test_missing_config_exit_1(capsys, tmp_path):
    code, _, _ = run(capsys, "--config", tmp_path / "nope.json", "print-config")
    assert code == 1


def test_sweep_gap_rows(capsys, coarse_config):
    code, out, _ = run(capsys, "--config", coarse_config, "sweep", "gap",
                       "--start", 2, "--stop", 5, "--step", 0.5)
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "param,x_min_m,z_min_m,U_min_J,label"
    assert len(lines) == 8


def test_sweep_remanence_monotone(capsys, coarse_config):
    code, out, _ = run(capsys, "--config", coarse_config, "sweep", "remanence",
                       "--start", 0, "--stop", 2, "--step", 0.25)
    assert code == 0
    z = [float(line.split(",")[2]) for line in out.splitlines()[1:]]
    assert len(z) == 9
    assert all(b >= a for a, b in zip(z, z[1:]))


def test_sweep_unknown_kind(capsys):
    code, _, _ = run(capsys, "sweep", "bogus", "--start", 1, "--stop", 2, "--step", 1)
    assert code == 2


def test_qfit(capsys, fig27_file):
    code, out, _ = run(capsys, "qfit", fig27_file)
    assert code == 0
    a = json.loads(out)
    assert a["q_loaded"] == pytest.approx(2007.8, rel=0.01)
    _, out, _ = run(capsys, "qfit", fig27_file, "--method", "lorentzian")
    b = json.loads(out)
    assert b["q_loaded"] == pytest.approx(a["q_loaded"], rel=0.02)
    _, out, _ = run(capsys, "qfit", fig27_file, "--format", "csv")
    assert out.splitlines()[0].startswith("f_r_hz,")


def test_qfit_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, "qfit", tmp_path / "missing.csv")
    assert code == 1 and err


def test_qfit_edge_resonance_exit_3(capsys, tmp_path):
    path = tmp_path / "flat.csv"
    path.write_text("frequency_hz,amplitude_db\n" + "".join(f"{i},0\n" for i in range(20)))
    assert run(capsys, "qfit", path)[0] == 3


def test_ringdown(capsys, tmp_path):
    f0, q0 = 10e9, 1e6
    tau = q0 / (2 * math.pi * f0)
    path = tmp_path / "trace.csv"
    with open(path, "w") as fh:
        write_ringdown(synthetic_ringdown(tau, pre=20), fh)
    code, out, _ = run(capsys, "ringdown", path, "--f0", 10)
    assert code == 0
    got = json.loads(out)["q0"]
    assert got == pytest.approx(q0, rel=1e-3)
    _, out, _ = run(capsys, "ringdown", path, "--f0", 10, "--beta", 1)
    assert json.loads(out)["q0"] == pytest.approx(2 * got)
    _, out, _ = run(capsys, "ringdown", path, "--f0", 10, "--pf", 4, "--pe", 1)
    assert json.loads(out)["beta1"] == pytest.approx(1 / 3)


def test_ringdown_flat_trace_exit_3(capsys, tmp_path):
    path = tmp_path / "flat.csv"
    path.write_text("time_s,voltage_v\n" + "".join(f"{i}e-9,0.5\n" for i in range(64)))
    assert run(capsys, "ringdown", path, "--f0", 10)[0] == 3


def test_classify(capsys):
    code, out, _ = run(capsys, "classify", "--bare", 10.04, "--before", 9.84,
                       "--after", 9.99, "--lift")
    assert (code, out) == (0, "lift_off\n")
    _, out, _ = run(capsys, "classify", "--bare", 10.04, "--before", 10.04, "--after", 9.98)
    assert out == "placed_on_stub\n"


def test_print_config(capsys):
    code, out, _ = run(capsys, "--print-config")
    assert code == 0
    cfg = json.loads(out)
    assert cfg["magnet"]["grade"] == "N50"
    assert run(capsys, "print-config")[1] == out


def test_no_command_is_usage_error(capsys):
    assert run(capsys)[0] == 2

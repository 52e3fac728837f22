from __future__ import annotations

import csv
import io
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from quadcone.cli import main, parse_angle


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def write_json(path, data):
    path.write_text(json.dumps(data))
    return str(path)


def zero_schedule(tmp_path, duration=1.0, **sim):
    arms = [{"cone_rate": 0.0, "rotor_rate": 0.0}] * 4
    data = {"segments": [{"t_start": 0.0, "arms": arms}],
            "simulation": {"duration": duration, "record_decimation": 100, **sim}}
    return write_json(tmp_path / "schedule.json", data)


def test_parse_angle():
    assert parse_angle("0.5") == 0.5
    assert parse_angle("18deg") == pytest.approx(math.pi / 10)


def test_simulate_free_fall(tmp_path):
    out = tmp_path / "trace.csv"
    assert main(["simulate", "--schedule", zero_schedule(tmp_path), "--out", str(out)]) == 0
    data = rows(out.read_text())
    assert float(data[-1]["z"]) == pytest.approx(-4.9, abs=1e-6)
    manifest = json.loads((tmp_path / "trace.csv.json").read_text())
    assert manifest["command"] == "simulate"
    assert manifest["params"]["total_mass"] == 0.429
    assert manifest["outputs"] == [str(out)]
    assert "version" in manifest


def test_simulate_scenario(tmp_path):
    out = tmp_path / "hover.csv"
    code = main(["simulate", "--scenario", "symmetric-hover", "--phi", "22.5deg",
                 "--duration", "0.5", "--decimation", "50", "--out", str(out)])
    assert code == 0
    data = rows(out.read_text())
    v = np.array([[float(r[c]) for c in ("vx", "vy", "vz")] for r in data])
    assert np.abs(v).max() < 1e-4


def test_simulate_is_byte_deterministic(tmp_path):
    sched = zero_schedule(tmp_path, duration=0.05, record_decimation=1)
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    main(["simulate", "--schedule", sched, "--out", str(a)])
    main(["simulate", "--schedule", sched, "--out", str(b)])
    assert a.read_bytes() == b.read_bytes()
    ma = json.loads((tmp_path / "a.csv.json").read_text())
    mb = json.loads((tmp_path / "b.csv.json").read_text())
    ma.pop("outputs"), mb.pop("outputs")
    assert ma == mb


@pytest.mark.parametrize("bad", ["{not json", json.dumps({"vehicle": {"total_mass": -1}}),
                                 json.dumps({"wings": 2})])
def test_simulate_malformed_config(tmp_path, bad):
    cfg = tmp_path / "vehicle.json"
    cfg.write_text(bad)
    out = tmp_path / "trace.csv"
    code = main(["simulate", "--config", str(cfg), "--schedule", zero_schedule(tmp_path),
                 "--out", str(out)])
    assert code == 2
    assert not out.exists() and not (tmp_path / "trace.csv.json").exists()


def test_simulate_malformed_schedule(tmp_path):
    out = tmp_path / "trace.csv"
    sched = write_json(tmp_path / "s.json", {"segments": [{"t_start": 0, "arms": [{"rotor_rate": -5}] * 4}]})
    assert main(["simulate", "--schedule", sched, "--out", str(out)]) == 2
    assert not out.exists()


def test_simulate_singularity_exit_3(tmp_path):
    sched = zero_schedule(tmp_path, duration=0.1, record_decimation=1,
                          initial_state={"attitude": [0, 1.5, 0], "body_rates": [0, 10, 0]})
    out = tmp_path / "trace.csv"
    assert main(["simulate", "--schedule", sched, "--out", str(out)]) == 3
    data = rows(out.read_text())
    assert 0 < len(data) < 1001
    assert "aborted_at" in json.loads((tmp_path / "trace.csv.json").read_text())


def test_hover_single(capsys):
    assert main(["hover", "--phi", "0"]) == 0
    (row,) = rows(capsys.readouterr().out)
    assert float(row["omega_13"]) == pytest.approx(361.4, abs=0.05)
    assert float(row["omega_24"]) == pytest.approx(361.4, abs=0.05)


def test_hover_sweep(capsys):
    assert main(["hover", "--phi-range", "0", str(math.pi / 4), "50"]) == 0
    data = rows(capsys.readouterr().out)
    assert len(data) == 50
    feasible = [r for r in data if r["feasible"] == "1"]
    assert data[-1]["feasible"] == "0"
    w24 = [float(r["omega_24"]) for r in feasible]
    assert np.all(np.diff(w24) > 0)
    assert len({r["omega_13"] for r in feasible}) == 1


def test_hover_empty_range(capsys):
    assert main(["hover", "--phi-range", "0.5", "0.1", "10"]) == 2
    assert main(["hover", "--phi-range", "0", "0.1", "0"]) == 2


def test_ft_hover(capsys, tmp_path):
    out = tmp_path / "ft.csv"
    assert main(["ft-hover", "--phi", "18deg", "--simulate", "--out", str(out)]) == 0
    (row,) = rows(out.read_text())
    assert float(row["theta_dot_c"]) == pytest.approx(399.5, abs=0.05)
    assert float(row["amp_mss"]) == pytest.approx(1.035, abs=5e-4)
    f = float(row["dominant_freq_hz"])
    assert f == pytest.approx(63.6, abs=4.0)
    assert abs(f * 2 * math.pi - float(row["theta_dot_c"])) < 2 * math.pi * 64 / 16
    assert (tmp_path / "ft.csv.json").exists()


def test_ft_hover_sweep_and_zero(capsys):
    assert main(["ft-hover", "--phi-range", "0.1", "0.785", "8"]) == 0
    rates = [float(r["theta_dot_c"]) for r in rows(capsys.readouterr().out)]
    assert np.all(np.diff(rates) > 0)
    assert main(["ft-hover", "--phi", "0"]) == 2
    assert "phi" in capsys.readouterr().err


def test_psd_on_ft_trace(tmp_path, capsys):
    trace = tmp_path / "ft.csv"
    main(["simulate", "--scenario", "ft-hover", "--phi", "18deg", "--periods", "16", "--out", str(trace)])
    capsys.readouterr()
    assert main(["psd", str(trace), "--column", "az"]) == 0
    captured = capsys.readouterr()
    spectrum = rows(captured.out)
    power = np.array([float(r["power"]) for r in spectrum])
    freq = np.array([float(r["frequency_hz"]) for r in spectrum])
    k = 1 + np.argmax(power[1:])
    assert abs(freq[k] - 399.535 / (2 * math.pi)) <= freq[1] - freq[0]
    assert "dominant_freq_hz=" in captured.err


def test_psd_constant_and_two_tone(tmp_path, capsys):
    t = np.arange(1000) / 1000.0
    path = tmp_path / "sig.csv"
    with open(path, "w", newline="") as fh:
        fh.write("t,flat,tones\n")
        for ti in t:
            fh.write(f"{ti:.17g},2.5,{math.sin(2 * math.pi * 40 * ti) + 0.3 * math.sin(2 * math.pi * 90 * ti):.17g}\n")
    assert main(["psd", str(path), "--column", "flat"]) == 0
    flat = rows(capsys.readouterr().out)
    assert all(abs(float(r["power"])) < 1e-25 for r in flat)
    assert main(["psd", str(path), "--column", "tones"]) == 0
    spectrum = rows(capsys.readouterr().out)
    power = np.array([float(r["power"]) for r in spectrum])
    freq = np.array([float(r["frequency_hz"]) for r in spectrum])
    assert sorted(freq[np.argsort(power)[-2:]]) == [40.0, 90.0]
    assert main(["psd", str(path), "--column", "missing"]) == 2
    assert main(["psd", str(tmp_path / "nope.csv")]) == 2


def test_tradeoff(capsys, tmp_path):
    assert main(["tradeoff", "--mu-points", "2"]) == 0
    data = rows(capsys.readouterr().out)
    assert len(data) == 2
    assert (float(data[0]["neg_range_m"]), float(data[0]["centripetal_force_n"])) == (0.0, 0.0)
    assert float(data[1]["neg_range_m"]) == pytest.approx(-0.04443, rel=1e-3)
    assert float(data[1]["centripetal_force_n"]) == pytest.approx(1120.5, rel=1e-3)
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    main(["tradeoff", "--out", str(a)])
    main(["tradeoff", "--out", str(b)])
    assert a.read_bytes() == b.read_bytes()
    phis = [float(r["phi_rad"]) for r in rows(a.read_text())]
    assert phis == sorted(phis) and len(phis) == 64
    assert main(["tradeoff", "--mu-points", "1"]) == 2


def test_bad_arguments_exit_2():
    with pytest.raises(SystemExit) as info:
        main(["hover", "--phi", "abc"])
    assert info.value.code == 2


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "quadcone", "hover", "--phi", "0"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0
    assert res.stdout.startswith("phi_rad,omega_13,omega_24")

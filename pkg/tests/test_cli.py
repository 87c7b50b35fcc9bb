import json
import math

import numpy as np
import pytest

from localphonon.cli import main
from localphonon.detection import FockDistribution, rabi_forward

G = 2 * math.pi * 20e3


def _config(tmp_path, body):
    path = tmp_path / "c.toml"
    path.write_text(body)
    return str(path)


SHORT = """
[time_grid]
start = 0.0
stop = 4e-5
step = 2e-5
"""


def test_geometry(tmp_path):
    out = tmp_path / "geo.json"
    assert main(["geometry", "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert len(data["positions_m"]) == 2
    assert main(["geometry", "--ions", "3"]) == 0


def test_scenario_writes_csv_and_sidecar(tmp_path):
    out = tmp_path / "fig3.csv"
    cfg = _config(tmp_path, SHORT)
    assert main(["scenario", "fig3", "--ideal", "--config", cfg, "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0].startswith("time_s") and len(lines) == 4
    meta = json.loads(out.with_suffix(".json").read_text())
    assert meta["config"]["scenario"] == "fig3_free" and meta["config"]["ideal_mode"]


def test_scenario_blockade_name(tmp_path, capsys):
    cfg = _config(tmp_path, SHORT)
    assert main(["scenario", "fig3", "--blockade", "--ideal", "--config", cfg]) == 0
    assert capsys.readouterr().out.startswith("time_s")


def test_sweep(tmp_path, capsys):
    cfg = _config(tmp_path, SHORT)
    assert main(["sweep", "--g-list", "0,10", "--in-kappa", "--ideal", "--config", cfg]) == 0
    rows = capsys.readouterr().out.splitlines()
    assert rows[0] == "g_rad_s,mean_leakage,max_leakage" and len(rows) == 3
    assert float(rows[1].split(",")[2]) > float(rows[2].split(",")[2])


def test_fit_rabi(tmp_path):
    trace = rabi_forward(FockDistribution([0.2, 0.7, 0.1]), G, 0.0, np.linspace(0, 3 * math.pi / G, 60))
    src = tmp_path / "trace.csv"
    src.write_text(trace.to_csv())
    out = tmp_path / "fit.json"
    assert main(["fit-rabi", "--in", str(src), "--g", str(G), "--out", str(out)]) == 0
    fit = json.loads(out.read_text())
    np.testing.assert_allclose(fit["populations"], [0.2, 0.7, 0.1], atol=1e-8)


@pytest.mark.parametrize("name", ["composite_cp", "pnr_map", "fig2_prep", "fig3_prep"])
def test_sequence(name, capsys):
    assert main(["sequence", name]) == 0
    summary = json.loads(capsys.readouterr().out)
    assert summary["duration_s"] > 0
    assert main(["sequence", name, "--dump"]) == 0
    assert "items" in json.loads(capsys.readouterr().out)


def test_exit_codes(tmp_path):
    assert main(["scenario", "fig9"]) == 1
    assert main(["scenario", "fig2", "--config", str(tmp_path / "missing.toml")]) == 1
    assert main(["fit-rabi", "--in", str(tmp_path / "missing.csv")]) == 1
    bad = _config(tmp_path, 'scenario = "custom"\ninitial = [["up", 2], ["down", 0]]\n' + SHORT
                  + "\n[hilbert]\nion_count = 2\nn_max = 2\ninternal_levels = 2\n")
    assert main(["scenario", "custom", "--ideal", "--config", bad]) == 2

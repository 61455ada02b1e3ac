import json
from pathlib import Path

import numpy as np
import pytest

from catlab import RunConfig
from catlab.harness import run_command


def read_csv(path: Path) -> tuple[list[str], np.ndarray]:
    lines = path.read_text().strip().splitlines()
    header = lines[0].split(",")
    rows = [line.split(",") for line in lines[1:]]
    return header, rows


def test_cold_time_sweep_peaks_near_1p4(tmp_path):
    cfg = RunConfig(
        n_particles=200,
        state_label="zero",
        beta_inv_over_eps=0.0,
        time_factors=[round(0.8 + 0.1 * k, 10) for k in range(11)],  # 0.8 .. 1.8
        out_dir=str(tmp_path),
    )
    run_command("time-sweep", cfg)
    header, rows = read_csv(tmp_path / "lambda_r_vs_time.csv")
    factors = np.array([float(r[header.index("time_factor")]) for r in rows])
    lams = np.array([float(r[header.index("lambda")]) for r in rows])
    peak = factors[lams.argmax()]
    assert 1.3 <= peak <= 1.5


def test_hot_time_sweep_peaks_near_1p1(tmp_path):
    cfg = RunConfig(
        n_particles=200,
        state_label="zero",
        beta_inv_over_eps=10.0,
        time_factors=[round(0.7 + 0.1 * k, 10) for k in range(9)],  # 0.7 .. 1.5
        out_dir=str(tmp_path),
    )
    run_command("time-sweep", cfg)
    header, rows = read_csv(tmp_path / "lambda_r_vs_time.csv")
    factors = np.array([float(r[header.index("time_factor")]) for r in rows])
    lams = np.array([float(r[header.index("lambda")]) for r in rows])
    peak = factors[lams.argmax()]
    assert 1.0 <= peak <= 1.2


def test_distribution_pi_state_symmetric_double_peak(tmp_path):
    cfg = RunConfig(
        n_particles=200, state_label="pi", beta_inv_over_eps=0.0, out_dir=str(tmp_path)
    )
    run_command("distribution", cfg)
    header, rows = read_csv(tmp_path / "jz_distribution.csv")
    p = np.array([float(r[1]) for r in rows])
    assert np.abs(p - p[::-1]).max() < 1e-6  # parity symmetric
    peaks = [
        i for i in range(1, p.size - 1)
        if p[i] > 1e-4 and p[i] > p[i - 1] and p[i] > p[i + 1]
    ]
    assert len(peaks) >= 2
    assert max(peaks) - min(peaks) > 30  # macroscopically separated


def test_temperature_sweep_rq_decays(tmp_path):
    cfg = RunConfig(
        n_particles=60,
        beta_inv_grid=[0.2, 2.0, 20.0],
        out_dir=str(tmp_path),
    )
    run_command("temp-sweep", cfg)
    header, rows = read_csv(tmp_path / "crossover.csv")
    assert header[:3] == ["state", "beta_inv", "lambda"]
    for state in ("pi", "zero"):
        rq = [float(r[header.index("r_q")]) for r in rows if r[0] == state]
        assert rq[0] > rq[1] > rq[2]
    # both states present at every grid point
    assert len(rows) == 6


def test_optimize_time_factor_records_choice(tmp_path):
    cfg = RunConfig(
        n_particles=60,
        beta_inv_grid=[5.0],
        time_factors=[1.0, 1.2, 1.4],
        optimize_time_factor=True,
        out_dir=str(tmp_path),
    )
    run_command("temp-sweep", cfg)
    header, rows = read_csv(tmp_path / "crossover.csv")
    chosen = {r[0]: float(r[header.index("time_factor")]) for r in rows}
    assert set(chosen) == {"pi", "zero"}
    assert all(v in (1.0, 1.2, 1.4) for v in chosen.values())
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert "maximizing search" in " ".join(manifest["notes"])


def test_qfi_map_csv_shape_and_manifest(tmp_path):
    cfg = RunConfig(
        n_particles=40, grid_theta=9, grid_phi=12, out_dir=str(tmp_path)
    )
    run_command("qfi-map", cfg)
    header, rows = read_csv(tmp_path / "neff_map.csv")
    assert header == ["theta", "phi", "value"]
    assert len(rows) == 9 * 12
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    # lambda_cl = u N / t = 4: the crossing solves 2 z^2 - sqrt(1 - z^2) = 1
    assert manifest["derived"]["lambda_cl"] == pytest.approx(4.0)
    assert manifest["derived"]["z_c0"] == pytest.approx(np.sqrt(3) / 2, abs=1e-9)
    assert manifest["time_factor_zero"] == 1.4

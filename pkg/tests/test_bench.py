import json

import pytest

from nisqemu.bench import (
    CSV_HEADER,
    RunRecord,
    SweepConfig,
    binomial_sigma,
    log2_time_slope,
    manifest_path,
    read_csv,
    run_noise_sweep,
    run_timing_sweep,
    success_rates,
    write_csv,
    write_manifest,
)

HEADER_LINE = ",".join(CSV_HEADER)


def test_config_validation():
    with pytest.raises(ValueError):
        SweepConfig("timing", qubit_list=[])
    with pytest.raises(ValueError):
        SweepConfig("noise", qubit_list=[2], noise_list=[])
    with pytest.raises(ValueError):
        SweepConfig("noise", qubit_list=[2], noise_list=[1.5])
    with pytest.raises(ValueError):
        SweepConfig("other", qubit_list=[2])
    with pytest.raises(ValueError):
        SweepConfig("timing", qubit_list=[2], engine="gpu")
    with pytest.raises(ValueError, match="unknown config keys"):
        SweepConfig.from_dict({"experiment": "timing", "qubit_list": [2], "color": "red"})


def test_default_noise_config():
    cfg = SweepConfig.default_noise()
    assert cfg.qubit_list == [2, 4, 6, 8, 10]
    assert cfg.noise_list == [0.0, 0.01, 0.02, 0.05, 0.1, 0.2, 0.5]
    assert (cfg.repetitions, cfg.shots, cfg.engine) == (30, 100, "trajectory")


def test_config_roundtrip(tmp_path):
    cfg = SweepConfig.default_noise(base_seed=5)
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(cfg.to_dict()))
    assert SweepConfig.load(path) == cfg


def test_timing_single_point_two_records():
    recs = run_timing_sweep(SweepConfig("timing", qubit_list=[4], repetitions=2, shots=10))
    assert [(r.algorithm, r.num_qubits) for r in recs] == [("ghz", 4), ("hidden_shift", 4)]
    assert all(r.wall_time >= 0 and not r.skipped for r in recs)
    assert all(r.peak_state_bytes == 16 * 2**4 for r in recs)


def test_timing_odd_size_marks_hidden_shift_skipped():
    recs = run_timing_sweep(SweepConfig("timing", qubit_list=[3], repetitions=1))
    assert len(recs) == 2
    assert not recs[0].skipped and recs[1].skipped


def test_timing_over_cap_is_skipped_not_dropped(monkeypatch):
    monkeypatch.setenv("NISQEMU_QUBIT_CAP", "6")
    recs = run_timing_sweep(SweepConfig("timing", qubit_list=[4, 8, 6], repetitions=1))
    skipped = [(r.algorithm, r.num_qubits) for r in recs if r.skipped]
    assert skipped == [("ghz", 8), ("hidden_shift", 8)]
    assert len(recs) == 6
    assert "GiB" in recs[1].reason or "MiB" in recs[1].reason or "KiB" in recs[1].reason


@pytest.mark.parametrize("engine", ["trajectory", "density_matrix"])
def test_timing_other_engines(engine):
    recs = run_timing_sweep(SweepConfig("timing", qubit_list=[2], noise_list=[0.1], repetitions=1, engine=engine))
    assert all(r.p == 0.1 and r.wall_time is not None for r in recs)
    if engine == "density_matrix":
        assert recs[0].peak_state_bytes == 16 * 4**2


def test_noise_sweep_cardinality_and_noiseless_column():
    cfg = SweepConfig("noise", qubit_list=[4, 6], noise_list=[0, 0.1], repetitions=30, engine="trajectory")
    recs = run_noise_sweep(cfg)
    assert len(recs) == 120
    assert all(r.success for r in recs if r.p == 0)
    assert all(r.wall_time is None for r in recs)
    assert [r.sort_key() for r in recs] == sorted(r.sort_key() for r in recs)


def test_noise_sweep_subgrid_reproduces_points():
    full = run_noise_sweep(SweepConfig("noise", qubit_list=[4], noise_list=[0.0, 0.1, 0.3], repetitions=5))
    sub = run_noise_sweep(SweepConfig("noise", qubit_list=[4], noise_list=[0.3], repetitions=5))
    assert [r for r in full if r.p == 0.3] == sub


def test_noise_sweep_workers_do_not_change_results():
    cfg = SweepConfig("noise", qubit_list=[2, 4], noise_list=[0.05, 0.2], repetitions=6)
    assert run_noise_sweep(cfg) == run_noise_sweep(cfg, workers=3)


def test_noise_sweep_density_matrix_engine():
    cfg = SweepConfig("noise", qubit_list=[4], noise_list=[0.0, 0.05], repetitions=5, engine="density_matrix")
    recs = run_noise_sweep(cfg)
    assert all(r.success for r in recs if r.p == 0)
    assert recs[0].peak_state_bytes == 16 * 4**4


def test_noise_sweep_statevector_engine_rejects_noise():
    cfg = SweepConfig("noise", qubit_list=[2], noise_list=[0.1], repetitions=1, engine="statevector")
    with pytest.raises(ValueError):
        run_noise_sweep(cfg)


@pytest.mark.slow
def test_noise_ordering_at_six_qubits():
    """Default-config rate at p=0.05 sits between the p=0 and p=0.5 rates."""
    cfg = SweepConfig.default_noise(qubit_list=[6], noise_list=[0.0, 0.05, 0.5])
    rates = success_rates(run_noise_sweep(cfg))
    r0, r05, r5 = (rates[(6, p)][0] / 30 for p in (0.0, 0.05, 0.5))
    assert r5 + 2 * binomial_sigma(rates[(6, 0.5)][0], 30) < r05 <= r0


@pytest.mark.slow
def test_monotone_degradation_six_qubits():
    grid = [0.0, 0.02, 0.05, 0.1, 0.2]
    rates = success_rates(run_noise_sweep(SweepConfig.default_noise(qubit_list=[6], noise_list=grid)))
    for lo, hi in zip(grid, grid[1:]):
        (s_lo, t_lo), (s_hi, t_hi) = rates[(6, lo)], rates[(6, hi)]
        allowance = 2 * (binomial_sigma(s_lo, t_lo) ** 2 + binomial_sigma(s_hi, t_hi) ** 2) ** 0.5
        assert s_hi / t_hi <= s_lo / t_lo + allowance, (lo, hi, rates)


def test_write_csv_empty(tmp_path):
    path = tmp_path / "empty.csv"
    write_csv([], path)
    assert path.read_text() == HEADER_LINE + "\n"


def test_write_csv_row_count_and_order(tmp_path):
    cfg = SweepConfig("noise", qubit_list=[6, 4], noise_list=[0.1, 0.0], repetitions=30)
    recs = run_noise_sweep(cfg)
    path = tmp_path / "sweep.csv"
    write_csv(list(reversed(recs)), path)
    lines = path.read_text().splitlines()
    assert len(lines) == 121
    assert lines[0] == HEADER_LINE
    rows = read_csv(path)
    keys = [(r["algorithm"], int(r["num_qubits"]), float(r["p"]), int(r["repetition"])) for r in rows]
    assert keys == sorted(keys)
    assert {r["success"] for r in rows} <= {"true", "false"}
    assert all(r["wall_time_s"] == "" for r in rows)


def test_write_csv_byte_identical_reruns(tmp_path):
    cfg = SweepConfig("noise", qubit_list=[4], noise_list=[0.0, 0.2], repetitions=10, base_seed=3)
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    write_csv(run_noise_sweep(cfg), a)
    write_csv(run_noise_sweep(cfg), b)
    assert a.read_bytes() == b.read_bytes()


def test_write_csv_formats(tmp_path):
    recs = [
        RunRecord("ghz", 3, 0.0, 0, wall_time=0.00123, peak_state_bytes=128),
        RunRecord("hidden_shift", 3, 0.0, 0, skipped=True, reason="odd"),
        RunRecord("hidden_shift", 2, 0.05, 1, success=False, peak_state_bytes=64),
    ]
    path = tmp_path / "f.csv"
    write_csv(recs, path)
    assert path.read_text().splitlines()[1:] == [
        "ghz,3,0.0,0,,1.230000e-03,128",
        "hidden_shift,2,0.05,1,false,,64",
        "hidden_shift,3,0.0,0,skipped,,0",
    ]


def test_write_csv_io_error_mentions_path(tmp_path):
    target = tmp_path / "missing" / "out.csv"
    with pytest.raises(OSError, match="missing"):
        write_csv([], target)


def test_manifest(tmp_path):
    cfg = SweepConfig.default_noise(qubit_list=[2], noise_list=[0.0], repetitions=2)
    csv_path = tmp_path / "run.csv"
    recs = run_noise_sweep(cfg)
    out = write_manifest(cfg, csv_path, recs)
    assert out == manifest_path(csv_path)
    doc = json.loads(out.read_text())
    assert doc["config"] == cfg.to_dict()
    assert doc["records"] == 2 and doc["skipped"] == 0
    assert doc["version"]


def test_log2_slope_on_synthetic_records():
    recs = [RunRecord("ghz", n, 0, 0, wall_time=2.0 ** (n - 20)) for n in range(2, 26, 2)]
    recs.append(RunRecord("ghz", 26, 0, 0, skipped=True))
    assert log2_time_slope(recs, "ghz") == pytest.approx(1.0)
    with pytest.raises(ValueError):
        log2_time_slope(recs, "hidden_shift")


def test_log2_slope_uses_median_per_size():
    recs = [RunRecord("ghz", n, 0, k, wall_time=2.0 ** n * f) for n in (10, 12, 14) for k, f in enumerate((1, 1, 50))]
    assert log2_time_slope(recs, "ghz") == pytest.approx(1.0)

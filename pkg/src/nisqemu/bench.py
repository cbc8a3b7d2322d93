"""Runtime-vs-qubits and accuracy-vs-noise sweeps with CSV output."""

from __future__ import annotations

import csv
import json
import logging
import math
import statistics
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Iterable, Literal, Sequence

import numpy as np

from .algorithms import ShiftProblem, build_ghz, build_hidden_shift, recover_shift
from .circuit import Circuit
from .simulator import (
    NoiseSpec,
    TrajectoryPlan,
    run_density_matrix,
    run_statevector,
    run_trajectories,
)
from .state import (
    DEFAULT_DENSITY_MATRIX_CAP,
    ResourceLimitError,
    check_density_matrix_cap,
    check_statevector_cap,
    density_matrix_bytes,
    sample,
    statevector_bytes,
)

log = logging.getLogger(__name__)

Engine = Literal["statevector", "trajectory", "density_matrix"]
ENGINES = ("statevector", "trajectory", "density_matrix")
ALGORITHMS = ("ghz", "hidden_shift")

DEFAULT_NOISE_GRID = (0.0, 0.01, 0.02, 0.05, 0.1, 0.2, 0.5)
DEFAULT_NOISE_QUBITS = (2, 4, 6, 8, 10)
DEFAULT_TIMING_QUBITS = tuple(range(2, 25, 2))
DEFAULT_REPETITIONS = 30
DEFAULT_SHOTS = 100

CSV_HEADER = ("algorithm", "num_qubits", "p", "repetition", "success", "wall_time_s", "peak_state_bytes")
SKIPPED = "skipped"


@dataclass
class SweepConfig:
    experiment: Literal["timing", "noise"]
    qubit_list: list[int] = field(default_factory=list)
    noise_list: list[float] = field(default_factory=lambda: [0.0])
    repetitions: int = DEFAULT_REPETITIONS
    shots: int = DEFAULT_SHOTS
    base_seed: int = 0
    #: defaults to ``trajectory`` for noise sweeps, ``statevector`` for timing
    engine: Engine | None = None

    def __post_init__(self):
        if self.engine is None:
            self.engine = "trajectory" if self.experiment == "noise" else "statevector"
        if self.experiment not in ("timing", "noise"):
            raise ValueError(f"experiment must be 'timing' or 'noise', got {self.experiment!r}")
        if self.engine not in ENGINES:
            raise ValueError(f"engine must be one of {ENGINES}, got {self.engine!r}")
        self.qubit_list = [int(n) for n in self.qubit_list]
        self.noise_list = [float(p) for p in self.noise_list]
        if not self.qubit_list:
            raise ValueError("qubit_list must not be empty")
        if any(n < 1 for n in self.qubit_list):
            raise ValueError(f"qubit counts must be positive, got {self.qubit_list}")
        if self.experiment == "noise" and not self.noise_list:
            raise ValueError("noise_list must not be empty for a noise sweep")
        for p in self.noise_list:
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"noise levels must lie in [0, 1], got {p}")
        if self.repetitions < 1 or self.shots < 1:
            raise ValueError("repetitions and shots must be positive")
        if self.base_seed < 0:
            raise ValueError(f"base_seed must be non-negative, got {self.base_seed}")

    @classmethod
    def default_noise(cls, **overrides) -> SweepConfig:
        kw = dict(
            experiment="noise",
            qubit_list=list(DEFAULT_NOISE_QUBITS),
            noise_list=list(DEFAULT_NOISE_GRID),
            engine="trajectory",
        )
        kw.update(overrides)
        return cls(**kw)

    @classmethod
    def default_timing(cls, **overrides) -> SweepConfig:
        kw = dict(experiment="timing", qubit_list=list(DEFAULT_TIMING_QUBITS), repetitions=3)
        kw.update(overrides)
        return cls(**kw)

    @classmethod
    def from_dict(cls, data: dict) -> SweepConfig:
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)

    @classmethod
    def load(cls, path) -> SweepConfig:
        """Read a config file, or the ``config`` block of a sweep manifest."""
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
        if isinstance(data, dict) and isinstance(data.get("config"), dict):
            data = data["config"]
        return cls.from_dict(data)

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class RunRecord:
    """One output row.

    ``success`` is only set by noise sweeps and ``wall_time`` only by timing
    sweeps. Rows with ``skipped=True`` mark sweep points that could not run.
    """

    algorithm: str
    num_qubits: int
    p: float
    repetition: int
    success: bool | None = None
    wall_time: float | None = None
    peak_state_bytes: int = 0
    skipped: bool = False
    reason: str = ""

    def sort_key(self):
        return (self.algorithm, self.num_qubits, self.p, self.repetition)


def peak_state_bytes(num_qubits: int, engine: str) -> int:
    if engine == "density_matrix":
        return density_matrix_bytes(num_qubits)
    return statevector_bytes(num_qubits)


def _check_cap(num_qubits: int, engine: str) -> None:
    if engine == "density_matrix":
        check_density_matrix_cap(num_qubits, DEFAULT_DENSITY_MATRIX_CAP)
    else:
        check_statevector_cap(num_qubits)


def _substream_seed(base_seed: int, *key: int) -> int:
    return int(np.random.SeedSequence(base_seed, spawn_key=tuple(key)).generate_state(1)[0])


def _shift_for(base_seed: int, n: int, repetition: int) -> ShiftProblem:
    # keyed on (n, repetition) only, so every noise level sees the same shifts
    rng = np.random.default_rng(np.random.SeedSequence(base_seed, spawn_key=(0, n, repetition)))
    return ShiftProblem.random(n, rng)


def build_circuit(algorithm: str, n: int, base_seed: int = 0, repetition: int = 0) -> Circuit:
    if algorithm == "ghz":
        return build_ghz(n)
    if algorithm == "hidden_shift":
        return build_hidden_shift(_shift_for(base_seed, n, repetition))
    raise ValueError(f"unknown algorithm {algorithm!r}")


def _execute(c: Circuit, engine: str, p: float, shots: int, seed: int) -> None:
    if engine == "statevector":
        sample(run_statevector(c), shots, seed)
    elif engine == "trajectory":
        run_trajectories(c, NoiseSpec(p), TrajectoryPlan(shots, seed, 1))
    else:
        rho = run_density_matrix(c, NoiseSpec(p))
        probs = np.clip(rho.diagonal(), 0, None)
        np.random.default_rng(seed).multinomial(shots, probs / probs.sum())


def time_run(c: Circuit, engine: str = "statevector", p: float = 0.0, shots: int = 1, seed: int = 0) -> float:
    """Wall time of one engine evolution plus sampling; construction is excluded."""
    t0 = time.perf_counter()
    _execute(c, engine, p, shots, seed)
    return time.perf_counter() - t0


def run_timing_sweep(cfg: SweepConfig, algorithms: Sequence[str] = ALGORITHMS) -> list[RunRecord]:
    """Median wall time per (algorithm, n) over ``cfg.repetitions`` runs.

    Over-cap sizes, and odd sizes for hidden shift, produce skipped rows.
    Statevector runs are noiseless; the other engines use ``noise_list[0]``.
    """
    if cfg.experiment != "timing":
        raise ValueError("run_timing_sweep needs a timing config")
    p = 0.0 if cfg.engine == "statevector" else cfg.noise_list[0]
    records = []
    for algorithm in algorithms:
        for n in cfg.qubit_list:
            rec = RunRecord(algorithm, n, p, 0, peak_state_bytes=peak_state_bytes(n, cfg.engine))
            try:
                _check_cap(n, cfg.engine)
                c = build_circuit(algorithm, n, cfg.base_seed)
            except (ResourceLimitError, ValueError) as exc:
                rec.skipped, rec.reason = True, str(exc)
                log.warning("skipping %s n=%d: %s", algorithm, n, exc)
                records.append(rec)
                continue
            times = [
                time_run(c, cfg.engine, p, cfg.shots, _substream_seed(cfg.base_seed, 1, n, r))
                for r in range(cfg.repetitions)
            ]
            rec.wall_time = statistics.median(times)
            log.info("%s n=%d: %.4g s", algorithm, n, rec.wall_time)
            records.append(rec)
    return records


def _noise_key(p: float) -> int:
    return int(round(p * 10**9))


def _noise_point(cfg: SweepConfig, n: int, p: float, repetition: int) -> RunRecord:
    rec = RunRecord("hidden_shift", n, p, repetition, peak_state_bytes=peak_state_bytes(n, cfg.engine))
    try:
        _check_cap(n, cfg.engine)
        prob = _shift_for(cfg.base_seed, n, repetition)
    except (ResourceLimitError, ValueError) as exc:
        rec.skipped, rec.reason = True, str(exc)
        return rec
    c = build_hidden_shift(prob)
    seed = _substream_seed(cfg.base_seed, 2, n, _noise_key(p), repetition)
    if cfg.engine == "density_matrix":
        rho = run_density_matrix(c, NoiseSpec(p))
        probs = np.clip(rho.diagonal(), 0, None)
        counts = np.random.default_rng(seed).multinomial(cfg.shots, probs / probs.sum())
        guess = int(np.argmax(counts))
        rec.success = guess == prob.shift_index
    elif cfg.engine == "statevector" and p > 0:
        raise ValueError("the statevector engine cannot run noisy points; use 'trajectory'")
    else:
        rec.success = recover_shift(c, NoiseSpec(p), cfg.shots, seed) == prob.shift
    return rec


def run_noise_sweep(cfg: SweepConfig, workers: int = 1) -> list[RunRecord]:
    """Hidden-shift success per (n, p, repetition).

    Shifts are drawn from a stream keyed on (base_seed, n, repetition) and
    sampling noise from one keyed on (base_seed, n, p, repetition), so a
    point's outcome depends neither on the rest of the grid nor on
    ``workers``.
    """
    if cfg.experiment != "noise":
        raise ValueError("run_noise_sweep needs a noise config")
    points = [(n, p, r) for n in cfg.qubit_list for p in cfg.noise_list for r in range(cfg.repetitions)]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(lambda pt: _noise_point(cfg, *pt), points))
    else:
        records = [_noise_point(cfg, *pt) for pt in points]
    return sorted(records, key=RunRecord.sort_key)


def success_rates(records: Iterable[RunRecord]) -> dict[tuple[int, float], tuple[int, int]]:
    """``{(n, p): (successes, trials)}`` over non-skipped noise records."""
    out: dict[tuple[int, float], list[int]] = {}
    for rec in records:
        if rec.skipped or rec.success is None:
            continue
        tally = out.setdefault((rec.num_qubits, rec.p), [0, 0])
        tally[0] += int(rec.success)
        tally[1] += 1
    return {k: (v[0], v[1]) for k, v in sorted(out.items())}


def log2_time_slope(records: Iterable[RunRecord], algorithm: str, top: int = 6) -> float:
    """Least-squares slope of log2(median wall time) against n over the ``top``
    largest measured even qubit counts."""
    times: dict[int, list[float]] = {}
    for r in records:
        if r.algorithm == algorithm and not r.skipped and r.wall_time and r.num_qubits % 2 == 0:
            times.setdefault(r.num_qubits, []).append(r.wall_time)
    sizes = sorted(times)[-top:]
    if len(sizes) < 2:
        raise ValueError(f"need at least two timed points for {algorithm}, got {len(sizes)}")
    medians = [float(np.median(times[n])) for n in sizes]
    return float(np.polyfit(np.array(sizes, dtype=float), np.log2(medians), 1)[0])


# -- output --------------------------------------------------------------------


def _format_float(x: float) -> str:
    return repr(float(x))


def _row(rec: RunRecord) -> list[str]:
    if rec.skipped:
        success = SKIPPED
    else:
        success = "" if rec.success is None else ("true" if rec.success else "false")
    wall = "" if rec.wall_time is None else f"{rec.wall_time:.6e}"
    return [
        rec.algorithm,
        str(rec.num_qubits),
        _format_float(rec.p),
        str(rec.repetition),
        success,
        wall,
        str(rec.peak_state_bytes),
    ]


def write_csv(records: Iterable[RunRecord], path) -> None:
    """Write records sorted by (algorithm, n, p, repetition).

    Skipped rows carry ``skipped`` in the success column.
    """
    path = Path(path)
    rows = [_row(r) for r in sorted(records, key=RunRecord.sort_key)]
    try:
        with path.open("w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(CSV_HEADER)
            writer.writerows(rows)
    except OSError as exc:
        raise OSError(exc.errno, f"cannot write CSV to {path}: {exc.strerror}") from exc


def read_csv(path) -> list[dict[str, str]]:
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


def manifest_path(csv_path) -> Path:
    p = Path(csv_path)
    return p.with_name(p.name + ".manifest.json")


def write_manifest(cfg: SweepConfig, csv_path, records: Sequence[RunRecord] | None = None) -> Path:
    from . import __version__

    doc = {"tool": "nisqemu", "version": __version__, "config": cfg.to_dict(), "csv": Path(csv_path).name}
    if records is not None:
        doc["records"] = len(records)
        doc["skipped"] = sum(r.skipped for r in records)
    out = manifest_path(csv_path)
    with out.open("w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return out


def binomial_sigma(successes: int, trials: int) -> float:
    rate = successes / trials
    return math.sqrt(rate * (1 - rate) / trials)

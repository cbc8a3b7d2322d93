"""Command-line driver.

Exit codes: 0 success, 2 usage error, 3 qubit cap exceeded, 4 sweep finished
with skipped rows.
"""

from __future__ import annotations

import argparse
import csv
import logging
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .algorithms import ShiftProblem, build_ghz, build_hidden_shift, most_frequent
from .bench import (
    DEFAULT_NOISE_GRID,
    DEFAULT_NOISE_QUBITS,
    DEFAULT_REPETITIONS,
    DEFAULT_SHOTS,
    DEFAULT_TIMING_QUBITS,
    SweepConfig,
    run_noise_sweep,
    run_timing_sweep,
    write_csv,
    write_manifest,
)
from .circuit import Circuit, CircuitParseError, load
from .simulator import NoiseSpec, TrajectoryPlan, run_density_matrix, run_statevector, run_trajectories
from .state import QUBIT_CAP_ENV, ResourceLimitError, check_statevector_cap, sample

EXIT_OK, EXIT_USAGE, EXIT_CAP, EXIT_PARTIAL = 0, 2, 3, 4


class UsageError(Exception):
    pass


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _float_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _probability(text: str) -> float:
    try:
        p = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not 0.0 <= p <= 1.0:
        raise argparse.ArgumentTypeError(f"noise must lie in [0, 1], got {p}")
    return p


def _add_run_flags(p: argparse.ArgumentParser, default_shots: int) -> None:
    p.add_argument("--shots", type=int, default=default_shots, help="measurement shots (default %(default)s)")
    p.add_argument("--seed", type=int, default=0, help="non-negative RNG seed (default %(default)s)")
    p.add_argument("--noise", type=_probability, default=0.0,
                   help="depolarizing probability per qubit per moment; >0 selects the trajectory engine")
    p.add_argument("--trajectories", type=int, default=None,
                   help="number of noise trajectories (default: one per shot); shots are split evenly")
    p.add_argument("--engine", choices=("auto", "statevector", "trajectory", "density-matrix"), default="auto",
                   help="override the engine; density-matrix needs at most 12 qubits")
    p.add_argument("--csv", metavar="PATH", help="also write the histogram as CSV")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nisqemu",
        description=f"Noisy quantum circuit emulator. {QUBIT_CAP_ENV} overrides the 30-qubit state-vector cap.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ghz", help="simulate and sample a GHZ circuit")
    p.add_argument("--qubits", type=int, required=True, help="number of qubits")
    _add_run_flags(p, 1000)

    p = sub.add_parser("hidden-shift", help="run the hidden-shift algorithm")
    p.add_argument("--qubits", type=int, required=True, help="even number of qubits")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--shift", help="hidden shift bitstring, qubit n-1 first")
    g.add_argument("--random-shift", action="store_true", help="draw the shift from --seed (default)")
    _add_run_flags(p, DEFAULT_SHOTS)

    p = sub.add_parser("run", help="simulate a circuit file")
    p.add_argument("path", help="circuit in the line-oriented text format")
    _add_run_flags(p, 1000)

    for name, default_qubits, default_noise in (
        ("timing-sweep", DEFAULT_TIMING_QUBITS, (0.0,)),
        ("noise-sweep", DEFAULT_NOISE_QUBITS, DEFAULT_NOISE_GRID),
    ):
        p = sub.add_parser(name, help=f"run the {name.split('-')[0]} experiment and write CSV")
        p.add_argument("--config", help="JSON file with SweepConfig fields; grid flags are ignored")
        p.add_argument("--qubits", type=_int_list, default=list(default_qubits),
                       help="comma-separated qubit counts (default %(default)s)")
        p.add_argument("--noise", type=_float_list, default=list(default_noise),
                       help="comma-separated noise levels (default %(default)s)")
        p.add_argument("--repetitions", type=int,
                       default=DEFAULT_REPETITIONS if name == "noise-sweep" else 3,
                       help="repetitions per point (default %(default)s)")
        p.add_argument("--shots", type=int, default=DEFAULT_SHOTS, help="shots per run (default %(default)s)")
        p.add_argument("--seed", type=int, default=0, help="base seed (default %(default)s)")
        p.add_argument("--engine", choices=("statevector", "trajectory", "density-matrix"),
                       default="trajectory" if name == "noise-sweep" else "statevector",
                       help="simulation engine (default %(default)s)")
        p.add_argument("--workers", type=int, default=1, help="parallel sweep points (noise sweep only)")
        p.add_argument("--out", required=True, help="output CSV path; a .manifest.json is written next to it")
    return parser


# -- helpers -------------------------------------------------------------------


def _histogram(c: Circuit, args) -> dict[str, int]:
    if args.shots < 1:
        raise UsageError("--shots must be positive")
    if args.seed < 0:
        raise UsageError("--seed must be non-negative")
    engine = args.engine
    if engine == "auto":
        engine = "trajectory" if args.noise > 0 else "statevector"
    if engine == "statevector" and args.noise > 0:
        raise UsageError("--engine statevector cannot simulate noise")
    if engine == "statevector":
        return sample(run_statevector(c), args.shots, args.seed)
    if engine == "density-matrix":
        rho = run_density_matrix(c, NoiseSpec(args.noise))
        probs = np.clip(rho.diagonal(), 0, None)
        counts = np.random.default_rng(args.seed).multinomial(args.shots, probs / probs.sum())
        return {format(i, f"0{c.num_qubits}b"): int(counts[i]) for i in np.flatnonzero(counts)}
    t = args.trajectories or args.shots
    if t < 1:
        raise UsageError("--trajectories must be positive")
    plan = TrajectoryPlan(t, args.seed, max(1, args.shots // t))
    return run_trajectories(c, NoiseSpec(args.noise), plan)


def format_histogram(hist: dict[str, int], total: int | None = None) -> str:
    """Aligned table, most frequent first; ties in lexicographic order."""
    total = sum(hist.values()) if total is None else total
    items = sorted(hist.items(), key=lambda kv: (-kv[1], kv[0]))
    width = max([len("bitstring"), *(len(k) for k in hist)])
    cw = max(len(str(total)), 5)
    lines = [f"{'bitstring':<{width}}  {'count':>{cw}}  freq"]
    lines += [f"{k:<{width}}  {v:>{cw}}  {v / total:.4f}" for k, v in items]
    return "\n".join(lines)


def _write_histogram_csv(hist: dict[str, int], path: str) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["bitstring", "count"])
        for k, v in sorted(hist.items(), key=lambda kv: (-kv[1], kv[0])):
            w.writerow([k, v])


def _emit(hist: dict[str, int], args) -> None:
    print(format_histogram(hist))
    if args.csv:
        _write_histogram_csv(hist, args.csv)


# -- subcommands ---------------------------------------------------------------


def cmd_ghz(args) -> int:
    if args.qubits < 1:
        raise UsageError(f"--qubits must be at least 1, got {args.qubits}")
    check_statevector_cap(args.qubits)
    _emit(_histogram(build_ghz(args.qubits), args), args)
    return EXIT_OK


def cmd_hidden_shift(args) -> int:
    n = args.qubits
    if n < 2 or n % 2:
        raise UsageError(f"--qubits must be even and at least 2, got {n}")
    if args.seed < 0:
        raise UsageError("--seed must be non-negative")
    check_statevector_cap(n)
    if args.shift is not None:
        try:
            prob = ShiftProblem(n, args.shift)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    else:
        prob = ShiftProblem.random(n, np.random.default_rng(np.random.SeedSequence(args.seed, spawn_key=(0,))))
    hist = _histogram(build_hidden_shift(prob), args)
    recovered = most_frequent(hist)
    print(f"true shift:      {prob.shift}")
    print(f"recovered shift: {recovered}")
    print(f"success:         {str(recovered == prob.shift).lower()}")
    total = sum(hist.values())
    print(f"shots:           {total}")
    top = dict(sorted(hist.items(), key=lambda kv: (-kv[1], kv[0]))[:8])
    print(format_histogram(top, total))
    if len(hist) > len(top):
        print(f"... {len(hist) - len(top)} more outcomes")
    if args.csv:
        _write_histogram_csv(hist, args.csv)
    return EXIT_OK


def cmd_run(args) -> int:
    try:
        c = load(args.path)
    except OSError as exc:
        raise UsageError(f"cannot read {args.path}: {exc.strerror}") from None
    except CircuitParseError as exc:
        raise UsageError(f"{args.path}: {exc}") from None
    check_statevector_cap(c.num_qubits)
    _emit(_histogram(c, args), args)
    return EXIT_OK


def cmd_sweep(args) -> int:
    experiment = "timing" if args.command == "timing-sweep" else "noise"
    out = Path(args.out)
    if not out.parent.is_dir():
        raise UsageError(f"output directory {out.parent} does not exist")
    try:
        if args.config:
            cfg = SweepConfig.load(args.config)
            if cfg.experiment != experiment:
                raise UsageError(f"config is for a {cfg.experiment} sweep, not {experiment}")
        else:
            cfg = SweepConfig(
                experiment=experiment,
                qubit_list=args.qubits,
                noise_list=args.noise,
                repetitions=args.repetitions,
                shots=args.shots,
                base_seed=args.seed,
                engine=args.engine.replace("-", "_"),
            )
    except OSError as exc:
        raise UsageError(f"cannot read config {args.config}: {exc.strerror}") from None
    except (ValueError, TypeError) as exc:
        raise UsageError(f"bad sweep config: {exc}") from None

    records = run_timing_sweep(cfg) if experiment == "timing" else run_noise_sweep(cfg, workers=args.workers)
    write_csv(records, out)
    write_manifest(cfg, out, records)
    skipped = sum(r.skipped for r in records)
    print(f"wrote {len(records)} rows to {out}")
    if skipped:
        print(f"{skipped} sweep point(s) skipped", file=sys.stderr)
        return EXIT_PARTIAL
    return EXIT_OK


COMMANDS = {
    "ghz": cmd_ghz,
    "hidden-shift": cmd_hidden_shift,
    "run": cmd_run,
    "timing-sweep": cmd_sweep,
    "noise-sweep": cmd_sweep,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"{parser.prog} {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceLimitError as exc:
        print(f"{parser.prog} {args.command}: resource limit: {exc}", file=sys.stderr)
        return EXIT_CAP


if __name__ == "__main__":
    sys.exit(main())

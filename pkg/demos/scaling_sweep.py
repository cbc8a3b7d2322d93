"""Time noiseless simulation as the register grows.

Each extra qubit doubles the state vector, so log2(wall time) climbs toward
one per qubit once fixed overheads stop dominating. This demo stops at 18
qubits to stay quick, where the fitted slope is still below one. The CLI
``timing-sweep`` runs up to 24 qubits.

Run with ``python demos/scaling_sweep.py``.
"""

from nisqemu.bench import SweepConfig, log2_time_slope, run_timing_sweep

cfg = SweepConfig("timing", qubit_list=list(range(8, 19, 2)), repetitions=3, shots=100)
records = run_timing_sweep(cfg)

for rec in records:
    print(f"{rec.algorithm:>12}  n={rec.num_qubits:2d}  {rec.wall_time * 1e3:9.2f} ms  {rec.peak_state_bytes:>10d} B")

for algorithm in ("ghz", "hidden_shift"):
    print(f"{algorithm}: log2(time) slope per qubit {log2_time_slope(records, algorithm):.2f}")

"""Depolarizing noise two ways: exact density matrices and sampled trajectories.

Run with ``python demos/noise_channels.py``.
"""

import numpy as np

from nisqemu import (
    DensityMatrix,
    NoiseSpec,
    TrajectoryPlan,
    build_ghz,
    depolarize_dm,
    run_density_matrix,
    run_trajectories,
)

# A single qubit in |0> pushed through the channel at a few strengths.
zero = DensityMatrix(1, np.array([[1, 0], [0, 0]], dtype=complex))
for p in (0.0, 0.3, 0.75, 1.0):
    print(f"p={p:<4}  diag of rho = {depolarize_dm(zero, 0, p).diagonal().round(4)}")

# p = 3/4 fully depolarizes. The maximally mixed state is fixed for every p.
mixed = DensityMatrix(1, np.eye(2) / 2)
print("I/2 stays put:", np.allclose(depolarize_dm(mixed, 0, 0.4).entries, mixed.entries))

# Noise after each moment of GHZ(3), exact.
circuit = build_ghz(3)
noise = NoiseSpec(0.1)
exact = run_density_matrix(circuit, noise).diagonal()

# The same thing from 10^4 Pauli trajectories.
hist = run_trajectories(circuit, noise, TrajectoryPlan(10_000, base_seed=5))
print(f"{'bitstring':>9}  {'exact':>7}  {'sampled':>7}")
for i, p in enumerate(exact):
    key = format(i, "03b")
    print(f"{key:>9}  {p:7.4f}  {hist.get(key, 0) / 10_000:7.4f}")

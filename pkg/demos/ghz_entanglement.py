"""Prepare GHZ states and look at what entanglement does to measurements.

Run with ``python demos/ghz_entanglement.py``.
"""

import numpy as np

from nisqemu import build_ghz, probabilities, run_statevector, sample, serialize

# One Hadamard followed by a CNOT chain. The circuit has n moments.
circuit = build_ghz(4)
print(serialize(circuit))

# Only the all-zeros and all-ones amplitudes survive, each 1/sqrt(2).
state = run_statevector(circuit)
nonzero = np.flatnonzero(np.abs(state.amplitudes) > 1e-12)
print("nonzero amplitudes at", [format(i, "04b") for i in nonzero])
print("their values", state.amplitudes[nonzero].round(6))

# Every shot returns all qubits in agreement, never a mixed string.
hist = sample(state, shots=1000, seed=1)
print("1000 shots:", hist)

# Marginal of a single qubit is a fair coin.
p = probabilities(state).reshape([2] * 4)
print("P(qubit 0 = 1) =", p.sum(axis=(0, 1, 2))[1])

"""Evolution engines.

* :func:`run_statevector` evolves a pure state through a noiseless circuit.
* :func:`run_density_matrix` evolves rho exactly, inserting a single-qubit
  depolarizing channel on every qubit after every moment. It is dense and
  slow on purpose; it serves as the reference for the trajectory engine.
* :func:`run_trajectories` unravels the same channel into random Pauli
  insertions on batches of state vectors and samples from each trajectory.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .circuit import Circuit
from .gates import PAULIS, Gate, GateApplication, apply_1q, apply_to_array
from .state import (
    DensityMatrix,
    StateVector,
    check_density_matrix_cap,
    check_statevector_cap,
    index_to_bitstring,
    zero_density_matrix,
    zero_state,
)

#: Budget for one batch of trajectory state vectors.
TRAJECTORY_BATCH_BYTES = 64 * 2**20

_NOISE_GATES = (PAULIS["X"], PAULIS["Y"], PAULIS["Z"])


@dataclass(frozen=True)
class NoiseSpec:
    """Depolarizing probability applied to each qubit after each moment."""

    p: float = 0.0
    policy: str = "per_moment"

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"depolarizing probability must lie in [0, 1], got {self.p}")
        if self.policy != "per_moment":
            raise ValueError(f"unsupported noise policy {self.policy!r}")

    @property
    def is_noiseless(self) -> bool:
        return self.p == 0.0


NOISELESS = NoiseSpec(0.0)


@dataclass(frozen=True)
class TrajectoryPlan:
    num_trajectories: int
    base_seed: int = 0
    shots_per_trajectory: int = 1

    def __post_init__(self):
        if self.num_trajectories < 1:
            raise ValueError(f"num_trajectories must be >= 1, got {self.num_trajectories}")
        if self.shots_per_trajectory < 1:
            raise ValueError(
                f"shots_per_trajectory must be >= 1, got {self.shots_per_trajectory}"
            )
        if self.base_seed < 0:
            raise ValueError(f"base_seed must be non-negative, got {self.base_seed}")

    @property
    def total_shots(self) -> int:
        return self.num_trajectories * self.shots_per_trajectory


def _check_p(p: float) -> None:
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"depolarizing probability must lie in [0, 1], got {p}")


# -- noiseless state vector ----------------------------------------------------


def run_statevector(c: Circuit, *, cap: int | None = None, dtype=np.complex128) -> StateVector:
    state = zero_state(c.num_qubits, cap=cap, dtype=dtype)
    amps = state.amplitudes
    for moment in c.moments:
        for app in moment.applications:
            apply_to_array(amps, c.num_qubits, app)
    return state


# -- density matrix ------------------------------------------------------------


def _conjugate(gate: Gate) -> Gate:
    if not np.iscomplexobj(gate.matrix) or not np.any(gate.matrix.imag):
        return gate
    return Gate(gate.name + "*", gate.arity, np.conj(gate.matrix))


def _conjugate_by(rho: np.ndarray, n: int, app: GateApplication) -> None:
    """rho <- U rho U^dagger, in place, on the flattened ``(4**n,)`` array.

    Row indices occupy qubits n..2n-1 of the flat index and column indices
    qubits 0..n-1, so U acts on the shifted targets and conj(U) on the
    original ones.
    """
    apply_to_array(rho, 2 * n, GateApplication(app.gate, tuple(t + n for t in app.targets)))
    apply_to_array(rho, 2 * n, GateApplication(_conjugate(app.gate), app.targets))


def apply_unitary_dm(rho: DensityMatrix, app: GateApplication) -> DensityMatrix:
    flat = rho.entries.reshape(-1).copy()
    _conjugate_by(flat, rho.num_qubits, app)
    return DensityMatrix(rho.num_qubits, flat.reshape(rho.entries.shape))


def depolarize_dm(rho: DensityMatrix, q: int, p: float) -> DensityMatrix:
    """Single-qubit depolarizing channel on qubit ``q``.

    Returns ``(1-p) rho + (p/3) (X rho X + Y rho Y + Z rho Z)``.
    """
    _check_p(p)
    n = rho.num_qubits
    if not 0 <= q < n:
        raise ValueError(f"qubit {q} out of range for {n} qubits")
    base = rho.entries.reshape(-1)
    out = (1.0 - p) * base
    for pauli in _NOISE_GATES:
        term = base.copy()
        _conjugate_by(term, n, GateApplication(pauli, (q,)))
        out += (p / 3.0) * term
    return DensityMatrix(n, out.reshape(rho.entries.shape))


def run_density_matrix(
    c: Circuit, noise: NoiseSpec = NOISELESS, *, cap: int | None = None
) -> DensityMatrix:
    check_density_matrix_cap(c.num_qubits, cap)
    n = c.num_qubits
    rho = zero_density_matrix(n, cap=cap)
    flat = rho.entries.reshape(-1)
    for moment in c.moments:
        for app in moment.applications:
            _conjugate_by(flat, n, app)
        if noise.p > 0:
            for q in range(n):
                rho = depolarize_dm(rho, q, noise.p)
            flat = rho.entries.reshape(-1)
    return rho


# -- trajectories --------------------------------------------------------------


def trajectory_rng(base_seed: int, k: int) -> np.random.Generator:
    """Independent stream for trajectory ``k``; identical to ``SeedSequence(base_seed).spawn``'s k-th child."""
    return np.random.default_rng(np.random.SeedSequence(base_seed, spawn_key=(k,)))


def _draw_trajectory(rng: np.random.Generator, depth: int, n: int, p: float, shots: int):
    """Pauli codes (0=I, 1=X, 2=Y, 3=Z) per (moment, qubit), then shot uniforms."""
    u = rng.random((depth, n))
    kind = rng.integers(1, 4, size=(depth, n))
    codes = np.where(u < p, kind, 0).astype(np.int8)
    return codes, rng.random(shots)


def run_trajectories(
    c: Circuit,
    noise: NoiseSpec,
    plan: TrajectoryPlan,
    *,
    cap: int | None = None,
    batch_bytes: int = TRAJECTORY_BATCH_BYTES,
) -> dict[str, int]:
    """Monte Carlo unravelling of the per-moment depolarizing channel.

    Every trajectory starts from |0...0>; after each moment each qubit
    independently receives I with probability 1-p or one of X, Y, Z with
    probability p/3 each. ``shots_per_trajectory`` bitstrings are sampled
    from every final state and all histograms are merged.

    Trajectory ``k`` draws all of its randomness from
    :func:`trajectory_rng` ``(base_seed, k)``, so the merged histogram does not
    depend on ``batch_bytes``.
    """
    n = c.num_qubits
    check_statevector_cap(n, cap)
    dim = 1 << n
    depth = c.depth()
    total = plan.num_trajectories
    batch = int(max(1, min(total, batch_bytes // (16 * dim))))
    counts = np.zeros(dim, dtype=np.int64)

    for start in range(0, total, batch):
        stop = min(total, start + batch)
        b = stop - start
        draws = [
            _draw_trajectory(trajectory_rng(plan.base_seed, k), depth, n, noise.p,
                             plan.shots_per_trajectory)
            for k in range(start, stop)
        ]
        codes = np.stack([d[0] for d in draws]) if depth else np.zeros((b, 0, n), np.int8)
        amps = np.zeros((b, dim), dtype=np.complex128)
        amps[:, 0] = 1
        for m, moment in enumerate(c.moments):
            for app in moment.applications:
                apply_to_array(amps, n, app)
            if noise.p == 0:
                continue
            for q in range(n):
                col = codes[:, m, q]
                for code, pauli in enumerate(_NOISE_GATES, start=1):
                    mask = col == code
                    if not mask.any():
                        continue
                    sub = amps[mask]
                    apply_1q(sub, n, pauli, q)
                    amps[mask] = sub
        probs = amps.real**2 + amps.imag**2
        cdf = np.cumsum(probs, axis=1)
        for row, (_, shots_u) in enumerate(draws):
            idx = np.searchsorted(cdf[row], shots_u * cdf[row, -1], side="right")
            np.add.at(counts, np.minimum(idx, dim - 1), 1)

    return {index_to_bitstring(int(i), n): int(counts[i]) for i in np.flatnonzero(counts)}

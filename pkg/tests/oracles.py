"""Reference constructions that share no code with the simulator kernels.

Everything here builds full ``2**n``-dimensional operators from Kronecker
products, so it is only usable for small registers.
"""

import math
from functools import reduce

import numpy as np
from scipy.stats import binom

E = [[np.array([[1, 0], [0, 0]], complex), np.array([[0, 1], [0, 0]], complex)],
     [np.array([[0, 0], [1, 0]], complex), np.array([[0, 0], [0, 1]], complex)]]

PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def kron_chain(ops_by_qubit: dict, n: int) -> np.ndarray:
    """Kronecker product with qubit n-1 leftmost (qubit 0 = least significant)."""
    return reduce(np.kron, [ops_by_qubit.get(q, np.eye(2)) for q in range(n - 1, -1, -1)])


def dense_unitary(matrix: np.ndarray, targets, n: int) -> np.ndarray:
    """Full operator of a 1- or 2-qubit matrix acting on ``targets``."""
    matrix = np.asarray(matrix, dtype=complex)
    if len(targets) == 1:
        return kron_chain({targets[0]: matrix}, n)
    a, b = targets
    full = np.zeros((1 << n, 1 << n), dtype=complex)
    # U = sum_{r,c} U[r,c] |r_a><c_a| (x) |r_b><c_b|, r = 2*bit(a) + bit(b)
    for r in range(4):
        for c in range(4):
            if matrix[r, c] != 0:
                full += matrix[r, c] * kron_chain({a: E[r >> 1][c >> 1], b: E[r & 1][c & 1]}, n)
    return full


def dense_circuit(circuit) -> np.ndarray:
    n = circuit.num_qubits
    u = np.eye(1 << n, dtype=complex)
    for moment in circuit.moments:
        for app in moment.applications:
            u = dense_unitary(app.gate.matrix, app.targets, n) @ u
    return u


def superop(u: np.ndarray) -> np.ndarray:
    """Column-stacking superoperator of rho -> U rho U^dagger."""
    return np.kron(u.conj(), u)


def depolarizing_superop(q: int, p: float, n: int) -> np.ndarray:
    terms = [(1 - p, "I"), (p / 3, "X"), (p / 3, "Y"), (p / 3, "Z")]
    return sum(w * superop(kron_chain({q: PAULI[name]}, n)) for w, name in terms)


def channel_circuit_superop(circuit, p: float) -> np.ndarray:
    """Whole noisy circuit as one ``4**n x 4**n`` superoperator."""
    n = circuit.num_qubits
    total = np.eye(1 << (2 * n), dtype=complex)
    for moment in circuit.moments:
        u = np.eye(1 << n, dtype=complex)
        for app in moment.applications:
            u = dense_unitary(app.gate.matrix, app.targets, n) @ u
        total = superop(u) @ total
        for q in range(n):
            total = depolarizing_superop(q, p, n) @ total
    return total


def apply_superop(s: np.ndarray, rho: np.ndarray) -> np.ndarray:
    dim = rho.shape[0]
    return (s @ rho.reshape(-1, order="F")).reshape(dim, dim, order="F")


def noisy_diagonal_oracle(circuit, p: float) -> np.ndarray:
    dim = 1 << circuit.num_qubits
    rho0 = np.zeros((dim, dim), dtype=complex)
    rho0[0, 0] = 1
    return np.real(np.diag(apply_superop(channel_circuit_superop(circuit, p), rho0)))


#: two-sided coverage of a +-3 sigma Gaussian band
THREE_SIGMA_COVERAGE = math.erf(3 / math.sqrt(2))


def multinomial_3sigma_violations(hist: dict, probs: np.ndarray, n: int) -> list:
    """Bitstrings whose count falls outside its 3-sigma-coverage binomial interval.

    Each marginal count is Binomial(N, p_k). The exact central interval keeps
    the 99.73% coverage of N p +- 3 sigma even when N p is tiny, where the
    Gaussian band is too narrow.
    """
    total = sum(hist.values())
    bad = []
    for k, pk in enumerate(np.clip(probs, 0, 1)):
        key = format(k, f"0{n}b")
        count = hist.get(key, 0)
        lo, hi = binom.interval(THREE_SIGMA_COVERAGE, total, pk)
        if not lo <= count <= hi:
            bad.append((key, count, total * pk, (lo, hi)))
    unknown = set(hist) - {format(k, f"0{n}b") for k in range(len(probs))}
    bad.extend((key, hist[key], 0.0, 0.0) for key in unknown)
    return bad


def random_state(n: int, rng) -> np.ndarray:
    v = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
    return v / np.linalg.norm(v)

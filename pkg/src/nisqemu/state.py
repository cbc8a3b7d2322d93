"""Pure and mixed state containers.

Qubit 0 is the least significant bit of a basis-state index. Bitstrings are
rendered most-significant first, so the rightmost character of ``"011"`` is
qubit 0 and the string reads like the binary form of the index.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

#: Environment variable overriding the state-vector qubit cap.
QUBIT_CAP_ENV = "NISQEMU_QUBIT_CAP"
DEFAULT_STATEVECTOR_CAP = 30
DEFAULT_DENSITY_MATRIX_CAP = 12


class ResourceLimitError(MemoryError):
    """Raised when a requested register would exceed the configured qubit cap."""

    def __init__(self, num_qubits: int, cap: int, required_bytes: int, kind: str = "state vector"):
        self.num_qubits = num_qubits
        self.cap = cap
        self.required_bytes = required_bytes
        super().__init__(
            f"{kind} on {num_qubits} qubits needs {format_bytes(required_bytes)} "
            f"(cap is {cap} qubits)"
        )


def format_bytes(nbytes: int) -> str:
    size = float(nbytes)
    for unit in ("B", "KiB", "MiB", "GiB", "TiB", "PiB"):
        if size < 1024 or unit == "PiB":
            return f"{size:.0f} {unit}" if unit == "B" else f"{size:.1f} {unit}"
        size /= 1024
    raise AssertionError("unreachable")


def statevector_cap() -> int:
    value = os.environ.get(QUBIT_CAP_ENV)
    if value is None or value == "":
        return DEFAULT_STATEVECTOR_CAP
    cap = int(value)
    if cap < 1:
        raise ValueError(f"{QUBIT_CAP_ENV} must be a positive integer, got {value!r}")
    return cap


def statevector_bytes(num_qubits: int, dtype=np.complex128) -> int:
    return np.dtype(dtype).itemsize << num_qubits


def density_matrix_bytes(num_qubits: int, dtype=np.complex128) -> int:
    return np.dtype(dtype).itemsize << (2 * num_qubits)


def check_statevector_cap(num_qubits: int, cap: int | None = None, dtype=np.complex128) -> None:
    if num_qubits < 1:
        raise ValueError(f"number of qubits must be positive, got {num_qubits}")
    cap = statevector_cap() if cap is None else cap
    if num_qubits > cap:
        raise ResourceLimitError(num_qubits, cap, statevector_bytes(num_qubits, dtype))


def check_density_matrix_cap(num_qubits: int, cap: int | None = None) -> None:
    if num_qubits < 1:
        raise ValueError(f"number of qubits must be positive, got {num_qubits}")
    cap = DEFAULT_DENSITY_MATRIX_CAP if cap is None else cap
    if num_qubits > cap:
        raise ResourceLimitError(
            num_qubits, cap, density_matrix_bytes(num_qubits), kind="density matrix"
        )


# -- bitstrings --------------------------------------------------------------


def index_to_bitstring(index: int, num_qubits: int) -> str:
    """Render basis index ``index`` as a bitstring, qubit ``num_qubits-1`` first.

    >>> index_to_bitstring(6, 3)
    '110'
    """
    if not 0 <= index < (1 << num_qubits):
        raise ValueError(f"index {index} out of range for {num_qubits} qubits")
    return format(index, f"0{num_qubits}b")


def bitstring_to_index(bits: str) -> int:
    """Inverse of :func:`index_to_bitstring`.

    >>> bitstring_to_index('110')
    6
    """
    if not bits or set(bits) - {"0", "1"}:
        raise ValueError(f"not a bitstring: {bits!r}")
    return int(bits, 2)


def qubit_bit(index: int, qubit: int) -> int:
    return (index >> qubit) & 1


# -- containers --------------------------------------------------------------


@dataclass
class StateVector:
    """Dense pure state of ``num_qubits`` qubits.

    ``amplitudes`` may be evolved in place by the gate kernels; callers that
    need an independent snapshot should use :meth:`copy`.
    """

    num_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes)
        if not np.iscomplexobj(self.amplitudes):
            self.amplitudes = self.amplitudes.astype(np.complex128)
        if self.amplitudes.shape != (1 << self.num_qubits,):
            raise ValueError(
                f"expected {1 << self.num_qubits} amplitudes for {self.num_qubits} qubits, "
                f"got shape {self.amplitudes.shape}"
            )

    @classmethod
    def from_amplitudes(cls, amplitudes) -> StateVector:
        amps = np.asarray(amplitudes, dtype=np.complex128)
        n = amps.size.bit_length() - 1
        if n < 1 or amps.size != 1 << n:
            raise ValueError(f"length {amps.size} is not a power of two >= 2")
        return cls(n, amps.copy())

    def copy(self) -> StateVector:
        return StateVector(self.num_qubits, self.amplitudes.copy())

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    @property
    def nbytes(self) -> int:
        return self.amplitudes.nbytes


@dataclass
class DensityMatrix:
    num_qubits: int
    entries: np.ndarray

    def __post_init__(self):
        self.entries = np.asarray(self.entries, dtype=np.complex128)
        dim = 1 << self.num_qubits
        if self.entries.shape != (dim, dim):
            raise ValueError(f"expected a {dim}x{dim} matrix, got {self.entries.shape}")

    def copy(self) -> DensityMatrix:
        return DensityMatrix(self.num_qubits, self.entries.copy())

    def trace(self) -> complex:
        return complex(np.trace(self.entries))

    def diagonal(self) -> np.ndarray:
        return np.real(np.diagonal(self.entries)).copy()

    def is_hermitian(self, atol: float = 1e-10) -> bool:
        return bool(np.allclose(self.entries, self.entries.conj().T, rtol=0, atol=atol))

    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.entries).min())


# -- operations --------------------------------------------------------------


def zero_state(n: int, *, cap: int | None = None, dtype=np.complex128) -> StateVector:
    """|0...0> on ``n`` qubits.

    Raises :class:`ResourceLimitError` if ``n`` exceeds the qubit cap, which
    defaults to 30 and may be overridden with ``NISQEMU_QUBIT_CAP``.
    ``dtype=np.complex64`` halves memory for large benchmarks.
    """
    check_statevector_cap(n, cap, dtype)
    amps = np.zeros(1 << n, dtype=dtype)
    amps[0] = 1
    return StateVector(n, amps)


def probabilities(s: StateVector) -> np.ndarray:
    amps = s.amplitudes
    return amps.real**2 + amps.imag**2


def dm_from_statevector(s: StateVector) -> DensityMatrix:
    amps = s.amplitudes.astype(np.complex128)
    return DensityMatrix(s.num_qubits, np.outer(amps, amps.conj()))


def zero_density_matrix(n: int, *, cap: int | None = None) -> DensityMatrix:
    check_density_matrix_cap(n, cap)
    dim = 1 << n
    rho = np.zeros((dim, dim), dtype=np.complex128)
    rho[0, 0] = 1
    return DensityMatrix(n, rho)


def histogram_from_indices(indices: np.ndarray, num_qubits: int) -> dict[str, int]:
    """Count basis indices into a ``{bitstring: count}`` dict, ordered by index."""
    values, counts = np.unique(np.asarray(indices, dtype=np.int64), return_counts=True)
    return {index_to_bitstring(int(v), num_qubits): int(c) for v, c in zip(values, counts)}


def sample_indices(probs: np.ndarray, shots: int, rng: np.random.Generator) -> np.ndarray:
    """Draw ``shots`` basis indices by inverse-CDF lookup on ``probs``."""
    cdf = np.cumsum(probs, dtype=np.float64)
    u = rng.random(shots) * cdf[-1]
    return np.minimum(np.searchsorted(cdf, u, side="right"), probs.size - 1)


def sample(s: StateVector, shots: int, seed: int | None = None) -> dict[str, int]:
    """Terminal measurement of every qubit, repeated ``shots`` times.

    The result is a multinomial draw from :func:`probabilities`; the same
    seed always yields the same histogram.
    """
    if shots < 1:
        raise ValueError(f"shots must be positive, got {shots}")
    rng = np.random.default_rng(seed)
    idx = sample_indices(probabilities(s), shots, rng)
    return histogram_from_indices(idx, s.num_qubits)


def merge_histograms(*hists: dict[str, int]) -> dict[str, int]:
    merged: dict[str, int] = {}
    for h in hists:
        for k, v in h.items():
            merged[k] = merged.get(k, 0) + v
    return dict(sorted(merged.items()))

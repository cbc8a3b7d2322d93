"""Gate set and strided state-vector kernels.

Kernels act on the last axis of an amplitude array, so the same code evolves
a single state ``(2**n,)`` or a batch of trajectories ``(B, 2**n)``. They
update the array in place and never build a ``2**n x 2**n`` matrix.

Two-qubit matrices use control-major ordering: row/column index
``2 * bit(targets[0]) + bit(targets[1])``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .state import StateVector

_R = 1 / np.sqrt(2)


@dataclass(frozen=True)
class Gate:
    name: str
    arity: int
    matrix: np.ndarray = field(compare=False, repr=False)

    def is_unitary(self, atol: float = 1e-12) -> bool:
        m = self.matrix
        return bool(np.allclose(m.conj().T @ m, np.eye(m.shape[0]), rtol=0, atol=atol))

    def __call__(self, *targets: int) -> GateApplication:
        return GateApplication(self, tuple(targets))


@dataclass(frozen=True)
class GateApplication:
    gate: Gate
    targets: tuple[int, ...]

    def __post_init__(self):
        targets = tuple(int(t) for t in self.targets)
        object.__setattr__(self, "targets", targets)
        if len(targets) != self.gate.arity:
            raise ValueError(
                f"{self.gate.name} acts on {self.gate.arity} qubit(s), got targets {targets}"
            )
        if len(set(targets)) != len(targets):
            raise ValueError(f"{self.gate.name} targets must be distinct, got {targets}")
        if any(t < 0 for t in targets):
            raise ValueError(f"negative qubit index in {targets}")

    def __str__(self) -> str:
        return f"{self.gate.name} {','.join(map(str, self.targets))}"


def _matrix(rows) -> np.ndarray:
    m = np.array(rows, dtype=np.complex128)
    m.setflags(write=False)
    return m


H = Gate("H", 1, _matrix([[_R, _R], [_R, -_R]]))
I = Gate("I", 1, _matrix([[1, 0], [0, 1]]))
X = Gate("X", 1, _matrix([[0, 1], [1, 0]]))
Y = Gate("Y", 1, _matrix([[0, -1j], [1j, 0]]))
Z = Gate("Z", 1, _matrix([[1, 0], [0, -1]]))
CX = Gate("CX", 2, _matrix([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]]))
CZ = Gate("CZ", 2, _matrix(np.diag([1, 1, 1, -1])))

#: Every gate the simulator understands, keyed by name.
GATES: dict[str, Gate] = {g.name: g for g in (H, I, X, Y, Z, CX, CZ)}
PAULIS: dict[str, Gate] = {"I": I, "X": X, "Y": Y, "Z": Z}


def hadamard() -> Gate:
    return H


def cnot() -> Gate:
    return CX


def cz() -> Gate:
    return CZ


def pauli(which: str) -> Gate:
    try:
        return PAULIS[which.upper()]
    except KeyError:
        raise ValueError(f"unknown Pauli {which!r}; expected one of I, X, Y, Z") from None


def gate_by_name(name: str) -> Gate:
    try:
        return GATES[name.upper()]
    except KeyError:
        raise ValueError(f"unknown gate {name!r}") from None


# -- kernels -----------------------------------------------------------------


def _pair_views(amps: np.ndarray, num_qubits: int, q: int):
    v = amps.reshape(-1, 1 << (num_qubits - q - 1), 2, 1 << q)
    return v[:, :, 0, :], v[:, :, 1, :]


def _quad_views(amps: np.ndarray, num_qubits: int, a: int, b: int):
    """Views ``s[ba][bb]`` of the amplitudes with bit(a)=ba, bit(b)=bb."""
    hi, lo = max(a, b), min(a, b)
    v = amps.reshape(-1, 1 << (num_qubits - hi - 1), 2, 1 << (hi - lo - 1), 2, 1 << lo)

    def view(ba, bb):
        bh, bl = (ba, bb) if a == hi else (bb, ba)
        return v[:, :, bh, :, bl, :]

    return [[view(0, 0), view(0, 1)], [view(1, 0), view(1, 1)]]


def apply_1q(amps: np.ndarray, num_qubits: int, gate: Gate, q: int) -> None:
    a0, a1 = _pair_views(amps, num_qubits, q)
    name = gate.name
    if name == "I":
        return
    if name == "X":
        t = a0.copy()
        a0[...] = a1
        a1[...] = t
    elif name == "Z":
        a1 *= -1
    elif name == "Y":
        t = a0.copy()
        a0[...] = a1
        a0 *= -1j
        a1[...] = t
        a1 *= 1j
    elif name == "H":
        t = a0 - a1
        a0 += a1
        a0 *= _R
        a1[...] = t
        a1 *= _R
    else:
        (u00, u01), (u10, u11) = gate.matrix
        t = a0.copy()
        a0 *= u00
        a0 += u01 * a1
        a1 *= u11
        a1 += u10 * t


def apply_2q(amps: np.ndarray, num_qubits: int, gate: Gate, a: int, b: int) -> None:
    s = _quad_views(amps, num_qubits, a, b)
    if gate.name == "CX":
        t = s[1][0].copy()
        s[1][0][...] = s[1][1]
        s[1][1][...] = t
    elif gate.name == "CZ":
        s[1][1] *= -1
    else:
        flat = [s[0][0].copy(), s[0][1].copy(), s[1][0].copy(), s[1][1].copy()]
        u = gate.matrix
        for r in range(4):
            out = s[r >> 1][r & 1]
            out[...] = 0
            for c in range(4):
                if u[r, c] != 0:
                    out += u[r, c] * flat[c]


def apply_to_array(amps: np.ndarray, num_qubits: int, app: GateApplication) -> None:
    """Apply ``app`` in place along the last axis of ``amps``."""
    if amps.shape[-1] != 1 << num_qubits:
        raise ValueError(f"last axis has length {amps.shape[-1]}, expected {1 << num_qubits}")
    if not amps.flags.c_contiguous:
        raise ValueError("amplitude array must be C-contiguous for in-place kernels")
    for t in app.targets:
        if t >= num_qubits:
            raise ValueError(f"target qubit {t} out of range for {num_qubits} qubits")
    if app.gate.arity == 1:
        apply_1q(amps, num_qubits, app.gate, app.targets[0])
    else:
        apply_2q(amps, num_qubits, app.gate, *app.targets)


def apply(state: StateVector, app: GateApplication) -> StateVector:
    """Evolve ``state`` by ``app`` in place and return it."""
    apply_to_array(state.amplitudes, state.num_qubits, app)
    return state

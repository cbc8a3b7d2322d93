"""GHZ and hidden-shift circuit builders.

The hidden-shift instance uses the inner-product bent function
``g(x) = x_L . x_R (mod 2)``, where ``x_L`` and ``x_R`` are the two halves of
the bitstring. Its phase oracle is a layer of CZ gates pairing qubit ``i``
with qubit ``i + n/2``, and g is its own dual, so the same CZ layer serves as
both the g oracle and the dual oracle.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .circuit import Circuit
from .gates import CX, CZ, GateApplication, H, X
from .simulator import NoiseSpec, TrajectoryPlan, run_statevector, run_trajectories
from .state import bitstring_to_index, index_to_bitstring, sample

#: Largest register accepted by :func:`classical_find_shift`.
CLASSICAL_SEARCH_LIMIT = 20


class ShiftNotFoundError(LookupError):
    pass


class AmbiguousShiftError(LookupError):
    def __init__(self, shifts: list[str]):
        self.shifts = shifts
        super().__init__(f"{len(shifts)} shifts are consistent: {', '.join(shifts)}")


@dataclass(frozen=True)
class ShiftProblem:
    num_qubits: int
    shift: str

    def __post_init__(self):
        if self.num_qubits < 2 or self.num_qubits % 2:
            raise ValueError(f"hidden shift needs an even, positive qubit count, got {self.num_qubits}")
        if len(self.shift) != self.num_qubits or set(self.shift) - {"0", "1"}:
            raise ValueError(f"shift must be a {self.num_qubits}-bit string, got {self.shift!r}")

    @property
    def shift_index(self) -> int:
        return bitstring_to_index(self.shift)

    @classmethod
    def random(cls, num_qubits: int, rng: np.random.Generator) -> ShiftProblem:
        s = int(rng.integers(0, 1 << num_qubits))
        return cls(num_qubits, index_to_bitstring(s, num_qubits))


def build_ghz(n: int) -> Circuit:
    """H on qubit 0 followed by the CX chain 0->1, 1->2, ..., n-2->n-1."""
    if n < 1:
        raise ValueError(f"GHZ needs at least one qubit, got {n}")
    c = Circuit(n)
    c.append(H(0))
    for q in range(n - 1):
        c.append(CX(q, q + 1))
    return c


def bent_value(x: str) -> int:
    """Inner product mod 2 of the first and second halves of ``x``.

    >>> bent_value("1010"), bent_value("1001")
    (1, 0)
    """
    if len(x) % 2 or set(x) - {"0", "1"}:
        raise ValueError(f"expected a bitstring of even length, got {x!r}")
    half = len(x) // 2
    return sum(a == b == "1" for a, b in zip(x[:half], x[half:])) % 2


def bent_index_value(x: int, n: int) -> int:
    """:func:`bent_value` on basis index ``x``: pairs qubit i with qubit i + n/2."""
    half = n // 2
    return bin((x >> half) & x & ((1 << half) - 1)).count("1") % 2


def bent_oracle(n: int) -> list[GateApplication]:
    """CZ(i, i + n/2) for every i: the phase oracle (-1)^g(x)."""
    half = n // 2
    return [CZ(i, i + half) for i in range(half)]


def shifted_oracle(prob: ShiftProblem) -> list[GateApplication]:
    """Phase oracle (-1)^g(x ^ s): conjugate the g oracle by X on the set bits of s."""
    flips = [X(q) for q in range(prob.num_qubits) if (prob.shift_index >> q) & 1]
    return flips + bent_oracle(prob.num_qubits) + flips


def hadamard_layer(n: int) -> list[GateApplication]:
    return [H(q) for q in range(n)]


def build_hidden_shift(prob: ShiftProblem) -> Circuit:
    """Hidden-shift circuit whose noiseless output is exactly ``prob.shift``.

    Layers: H^n; the shifted oracle (-1)^g(x^s); H^n; the g oracle; H^n.
    Gates are packed with the ``earliest`` strategy.
    """
    n = prob.num_qubits
    c = Circuit(n)
    c.extend(hadamard_layer(n))
    c.extend(shifted_oracle(prob))
    c.extend(hadamard_layer(n))
    c.extend(bent_oracle(n))
    c.extend(hadamard_layer(n))
    return c


def classical_find_shift(
    n: int, f: Callable[[int], int], g: Callable[[int], int]
) -> str:
    """Exhaustive search for the s with ``f(x) == g(x ^ s)`` for all x.

    ``f`` and ``g`` take basis indices. Both are tabulated once, then all
    ``2**n`` candidate shifts are checked against the full tables.
    """
    if n < 1 or n > CLASSICAL_SEARCH_LIMIT:
        raise ValueError(f"exhaustive shift search supports 1..{CLASSICAL_SEARCH_LIMIT} bits, got {n}")
    xs = np.arange(1 << n)
    f_table = np.fromiter((f(int(x)) & 1 for x in xs), dtype=np.int8, count=xs.size)
    g_table = np.fromiter((g(int(x)) & 1 for x in xs), dtype=np.int8, count=xs.size)
    found = [s for s in range(1 << n) if np.array_equal(f_table, g_table[xs ^ s])]
    if not found:
        raise ShiftNotFoundError(f"no {n}-bit shift relates f and g")
    if len(found) > 1:
        raise AmbiguousShiftError([index_to_bitstring(s, n) for s in found])
    return index_to_bitstring(found[0], n)


def most_frequent(hist: dict[str, int]) -> str:
    """Argmax of a histogram; ties go to the lexicographically smallest key."""
    if not hist:
        raise ValueError("empty histogram")
    return min(hist, key=lambda k: (-hist[k], k))


def recover_shift(c: Circuit, noise: NoiseSpec, shots: int, seed: int) -> str:
    """Run ``c`` and return its most frequent measured bitstring.

    Noiseless runs sample ``shots`` times from one state vector; noisy runs
    use one trajectory per shot.
    """
    if shots < 1:
        raise ValueError(f"shots must be positive, got {shots}")
    if noise.is_noiseless:
        hist = sample(run_statevector(c), shots, seed)
    else:
        hist = run_trajectories(c, noise, TrajectoryPlan(shots, seed, 1))
    return most_frequent(hist)

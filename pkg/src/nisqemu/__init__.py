"""State-vector and density-matrix circuit emulation with depolarizing noise."""

from .algorithms import (
    ShiftProblem,
    bent_value,
    build_ghz,
    build_hidden_shift,
    classical_find_shift,
    recover_shift,
)
from .circuit import Circuit, Moment, deserialize, serialize
from .gates import CX, CZ, GateApplication, H, I, X, Y, Z, apply, cnot, cz, hadamard, pauli
from .simulator import (
    NoiseSpec,
    TrajectoryPlan,
    depolarize_dm,
    run_density_matrix,
    run_statevector,
    run_trajectories,
)
from .state import (
    DensityMatrix,
    ResourceLimitError,
    StateVector,
    dm_from_statevector,
    probabilities,
    sample,
    zero_state,
)

__version__ = "0.1.0"

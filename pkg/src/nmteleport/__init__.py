"""Exact simulator of polarization-qubit teleportation through correlated
dephasing environments, with a Monte Carlo oracle and closed-form
fidelity analysis."""

from .analysis import crossover, f_memory, f_optimal, f_standard, figure2_sweep
from .engine import PhaseTag, PhaseTaggedState, apply_local_unitary, dephase, lift, project_bell, reduce
from .errors import ContractViolation, NoCrossoverError, ZeroProbabilityError
from .oracle import OracleReport, compare, oracle_run
from .protocol import (
    CORRECTION_TABLE,
    ProtocolConfig,
    Strategy,
    TeleportationReport,
    auto_phase,
    run,
    run_sampled,
)
from .qlinalg import (
    BellOutcome,
    DensityMatrix,
    StateVector,
    Unitary,
    apply_unitary,
    fidelity_pure,
    partial_trace,
    phase_gate,
    tensor,
)
from .spectrum import DephasingEvent, JointSpectrum

__all__ = [
    "BellOutcome", "CORRECTION_TABLE", "ContractViolation", "DensityMatrix",
    "DephasingEvent", "JointSpectrum", "NoCrossoverError", "OracleReport",
    "PhaseTag", "PhaseTaggedState", "ProtocolConfig", "StateVector",
    "Strategy", "TeleportationReport", "Unitary", "ZeroProbabilityError",
    "apply_local_unitary", "apply_unitary", "auto_phase", "compare",
    "crossover", "dephase", "f_memory", "f_optimal", "f_standard",
    "fidelity_pure", "figure2_sweep", "lift", "oracle_run", "partial_trace",
    "phase_gate", "project_bell", "reduce", "run", "run_sampled", "tensor",
]

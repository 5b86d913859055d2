"""Qubit error probability (QEP) from calibration data, and QEP-guided
zero-noise extrapolation, with desk-scale noisy simulators to check it."""

__version__ = "0.1.0"

from .calib import (
    CalibrationSnapshot,
    CalibrationWarning,
    SnapshotProfile,
    WarningKind,
    load_snapshot,
    synthetic_snapshot,
    warnings_for,
)
from .circuit import (
    Circuit,
    Gate,
    GateKind,
    TrotterParams,
    build_trotter_ising,
    decompose_to_native,
    parse,
    serialize,
    unitary_of,
)
from .mitigate import Axis, ZneResult, amplify, linear_fit, readout_mitigate, zne
from .qep import QepReport, Schedule, mean_qep, qep, schedule
from .sim import build_noise_model, magnetization, run_density_matrix, run_stabilizer

__all__ = [
    "__version__",
    "amplify",
    "Axis",
    "build_noise_model",
    "build_trotter_ising",
    "CalibrationSnapshot",
    "CalibrationWarning",
    "Circuit",
    "decompose_to_native",
    "Gate",
    "GateKind",
    "linear_fit",
    "load_snapshot",
    "magnetization",
    "mean_qep",
    "parse",
    "qep",
    "QepReport",
    "readout_mitigate",
    "run_density_matrix",
    "run_stabilizer",
    "Schedule",
    "schedule",
    "serialize",
    "SnapshotProfile",
    "synthetic_snapshot",
    "TrotterParams",
    "unitary_of",
    "WarningKind",
    "warnings_for",
    "zne",
    "ZneResult",
]

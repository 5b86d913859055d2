from .density import DensityMatrix, SimulationError, run_density_matrix, twirled_relaxation
from .noise import (
    Dephase,
    Depolarize,
    GateOp,
    MissingCalibrationError,
    NoiseModel,
    Relax,
    build_noise_model,
    dephasing_lambda,
    depolarizing_from_error,
    relaxation_gamma,
)
from .results import ObservableEstimate, ZExpectations, magnetization
from .stabilizer import NonCliffordError, check_clifford, exact_z_clifford, run_stabilizer
from .tableau import Tableau


def simulate(c, nm, backend: str, shots: int = 0, seed: int = 0, threads=None) -> ZExpectations:
    """Dispatch to the ``dm`` or ``stab`` backend."""
    if backend == "dm":
        return run_density_matrix(c, nm)
    if backend == "stab":
        return run_stabilizer(c, nm, shots, seed, threads=threads)
    raise ValueError(f"unknown backend {backend!r} (expected 'dm' or 'stab')")

__all__ = [
    "build_noise_model",
    "check_clifford",
    "DensityMatrix",
    "Dephase",
    "dephasing_lambda",
    "Depolarize",
    "depolarizing_from_error",
    "exact_z_clifford",
    "GateOp",
    "magnetization",
    "MissingCalibrationError",
    "NoiseModel",
    "NonCliffordError",
    "ObservableEstimate",
    "Relax",
    "relaxation_gamma",
    "run_density_matrix",
    "run_stabilizer",
    "simulate",
    "SimulationError",
    "Tableau",
    "twirled_relaxation",
    "ZExpectations",
]

from .ir import (
    NATIVE_KINDS,
    Circuit,
    CircuitError,
    Gate,
    GateKind,
    cz,
    measure,
    prune_identity,
    rx,
    rz,
    rzz,
    sx,
    x,
)
from .native import decompose_to_native
from .text import CircuitParseError, parse, serialize
from .trotter import TrotterParams, build_trotter_ising, chain_edges
from .unitary import equal_up_to_phase, gate_matrix, unitary_of

__all__ = [
    "NATIVE_KINDS",
    "Circuit",
    "CircuitError",
    "CircuitParseError",
    "Gate",
    "GateKind",
    "TrotterParams",
    "build_trotter_ising",
    "chain_edges",
    "cz",
    "decompose_to_native",
    "equal_up_to_phase",
    "gate_matrix",
    "measure",
    "parse",
    "prune_identity",
    "rx",
    "rz",
    "rzz",
    "serialize",
    "sx",
    "unitary_of",
    "x",
]

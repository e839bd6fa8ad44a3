"""Simulation and verification toolkit for the five-qubit perfect code."""

from .code5 import (
    CodeTable,
    EncoderUnitary,
    LogicalPair,
    build_encoder,
    decode_and_diagnose,
    encode,
    logical_states,
    recover,
    syndrome_table,
)
from .codesearch import CodeCandidate, check_balance, check_qec, min_code_length, search_signs
from .noise import EnvChannel, corrected_fidelity, fidelity_sweep, unencoded_fidelity
from .pauli import PauliError, all_errors
from .statevec import GateSpec, StateVector, apply_block_unitary, apply_gate, basis_state

__version__ = "0.1.0"

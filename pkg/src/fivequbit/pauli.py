"""The sixteen single-qubit error operators on the five code bits.

Code bit ``k`` (1..5) lives on state-vector qubit ``5 - k``, so bit 1 is the
most significant. ``B`` is a bit flip (X), ``S`` a sign flip (Z) and ``BS``
both, realized as ``X @ Z = -iY``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .statevec import I2, X, Z, GateSpec, StateVector, apply_gate

NUM_CODE_BITS = 5
KINDS = ("None", "B", "S", "BS")

_SINGLE = {"None": I2, "B": X, "S": Z, "BS": X @ Z}


def bit_to_qubit(bit: int, num_bits: int = NUM_CODE_BITS) -> int:
    if not 1 <= bit <= num_bits:
        raise ValueError(f"code bit must be in 1..{num_bits}, got {bit}")
    return num_bits - bit


@dataclass(frozen=True)
class PauliError:
    kind: str
    qubit: int | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown error kind {self.kind!r}")
        if self.kind == "None":
            if self.qubit is not None:
                raise ValueError("the None error carries no qubit")
        elif self.qubit is None or not 1 <= self.qubit <= NUM_CODE_BITS:
            raise ValueError(f"error qubit must be in 1..{NUM_CODE_BITS}, got {self.qubit}")

    @classmethod
    def parse(cls, label: str) -> PauliError:
        label = label.strip()
        if label == "None":
            return cls("None")
        kind = label.rstrip("0123456789")
        digits = label[len(kind):]
        if not digits:
            raise ValueError(f"cannot parse error label {label!r}")
        return cls(kind, int(digits))

    @property
    def label(self) -> str:
        return "None" if self.kind == "None" else f"{self.kind}{self.qubit}"

    def __str__(self) -> str:
        return self.label

    @property
    def single(self) -> np.ndarray:
        return _SINGLE[self.kind]

    def matrix(self) -> np.ndarray:
        """Dense ``32 x 32`` operator on the five code bits."""
        return _full_matrix(self.kind, self.qubit)

    def apply(self, state: StateVector) -> StateVector:
        if self.kind == "None":
            return state
        if state.num_qubits < NUM_CODE_BITS:
            raise ValueError("Pauli errors act on a register of at least five qubits")
        return apply_gate(state, GateSpec(self.single, (bit_to_qubit(self.qubit),)))


@lru_cache(maxsize=None)
def _full_matrix(kind: str, qubit: int | None) -> np.ndarray:
    out = np.eye(1, dtype=complex)
    for bit in range(1, NUM_CODE_BITS + 1):
        out = np.kron(out, _SINGLE[kind] if bit == qubit else I2)
    out.flags.writeable = False
    return out


def all_errors() -> list[PauliError]:
    """None followed by B1..B5, S1..S5, BS1..BS5."""
    errs = [PauliError("None")]
    for kind in ("B", "S", "BS"):
        errs.extend(PauliError(kind, k) for k in range(1, NUM_CODE_BITS + 1))
    return errs

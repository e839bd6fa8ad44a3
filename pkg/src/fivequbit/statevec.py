"""Dense state-vector simulation.

Amplitude index ``i`` of an ``n``-qubit register is read as the bit string
``|i_{n-1} ... i_0>``; qubit ``q`` is bit ``i_q`` so qubit 0 is the least
significant. Whenever a list of qubits is passed along with a matrix, the
first listed qubit is the most significant bit of the matrix index.

All values are immutable; every operation returns a fresh ``StateVector``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

ATOL = 1e-12
MAX_QUBITS = 12

# Single-qubit constants.
I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
# Rotation R: |0> -> (|0>+|1>)/sqrt2, |1> -> (|0>-|1>)/sqrt2.
R = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)


class NotUnitaryError(ValueError):
    """Raised when a matrix that must be unitary is not."""


def is_unitary(matrix: np.ndarray, atol: float = ATOL) -> bool:
    m = np.asarray(matrix)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    return bool(np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0]))) < atol)


def _check_unitary(matrix: np.ndarray) -> np.ndarray:
    m = np.asarray(matrix, dtype=complex)
    if not is_unitary(m):
        raise NotUnitaryError(f"matrix of shape {m.shape} is not unitary within {ATOL:g}")
    return m


@dataclass(frozen=True)
class StateVector:
    """Complex amplitudes over ``num_qubits`` qubits.

    ``normalized=False`` marks an unnormalized projection branch; such
    vectors skip the unit-norm check.
    """

    num_qubits: int
    amplitudes: np.ndarray = field(repr=False)
    normalized: bool = True

    def __post_init__(self):
        if not 1 <= self.num_qubits <= MAX_QUBITS:
            raise ValueError(f"num_qubits must be in 1..{MAX_QUBITS}, got {self.num_qubits}")
        amps = np.array(self.amplitudes, dtype=complex).reshape(-1)
        if amps.size != 2**self.num_qubits:
            raise ValueError(
                f"expected {2**self.num_qubits} amplitudes for {self.num_qubits} qubits, got {amps.size}"
            )
        if self.normalized and abs(np.vdot(amps, amps).real - 1.0) > ATOL:
            raise ValueError("state is not normalized; pass normalized=False for projection branches")
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def from_amplitudes(cls, amplitudes: Sequence[complex], normalized: bool = True) -> StateVector:
        amps = np.asarray(amplitudes, dtype=complex).reshape(-1)
        n = int(round(np.log2(amps.size))) if amps.size else 0
        return cls(n, amps, normalized)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def norm_squared(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    def normalize(self) -> StateVector:
        nrm = np.sqrt(self.norm_squared())
        if nrm == 0:
            raise ValueError("cannot normalize the zero vector")
        return StateVector(self.num_qubits, self.amplitudes / nrm)

    def tensor(self) -> np.ndarray:
        """Amplitudes reshaped to ``(2,) * n``; axis ``n-1-q`` is qubit ``q``."""
        return self.amplitudes.reshape((2,) * self.num_qubits)

    def kron(self, other: StateVector) -> StateVector:
        """``self`` on the high-order qubits, ``other`` on the low-order ones."""
        return StateVector(
            self.num_qubits + other.num_qubits,
            np.kron(self.amplitudes, other.amplitudes),
            self.normalized and other.normalized,
        )

    def allclose(self, other: StateVector, atol: float = ATOL) -> bool:
        return self.num_qubits == other.num_qubits and bool(
            np.max(np.abs(self.amplitudes - other.amplitudes)) < atol
        )


@dataclass(frozen=True)
class GateSpec:
    """A 1- or 2-qubit gate with optional polarity-aware controls.

    ``controls`` holds ``(qubit, value)`` pairs; the gate fires only when
    every control qubit equals ``value`` (1 for a filled circle, 0 for an
    empty one).
    """

    matrix: np.ndarray = field(repr=False)
    targets: tuple[int, ...]
    controls: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        m = _check_unitary(self.matrix)
        targets = tuple(int(t) for t in self.targets)
        controls = tuple((int(q), int(v)) for q, v in self.controls)
        if m.shape not in ((2, 2), (4, 4)):
            raise ValueError(f"gate matrix must be 2x2 or 4x4, got {m.shape}")
        if m.shape[0] != 2 ** len(targets):
            raise ValueError("matrix dimension does not match the number of targets")
        wires = list(targets) + [q for q, _ in controls]
        if len(set(wires)) != len(wires):
            raise ValueError("targets and controls must be distinct qubits")
        if any(v not in (0, 1) for _, v in controls):
            raise ValueError("control polarity must be 0 or 1")
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "targets", targets)
        object.__setattr__(self, "controls", controls)

    def wires(self) -> list[int]:
        return [q for q, _ in self.controls] + list(self.targets)

    def block_matrix(self) -> np.ndarray:
        """Matrix on ``wires()``: controls first (high bits), then targets."""
        nc = len(self.controls)
        dt = self.matrix.shape[0]
        full = np.eye(dt * 2**nc, dtype=complex)
        active = 0
        for _, v in self.controls:
            active = (active << 1) | v
        lo = active * dt
        full[lo : lo + dt, lo : lo + dt] = self.matrix
        return full


def hadamard_like(target: int) -> GateSpec:
    return GateSpec(R, (target,))


def cnot(control: int, target: int) -> GateSpec:
    return GateSpec(X, (target,), ((control, 1),))


def cphase(control: int, target: int, phase: float = np.pi, polarity: int = 1) -> GateSpec:
    """Conditional phase ``exp(i*phase)`` on ``target=1`` when ``control == polarity``."""
    return GateSpec(np.diag([1, np.exp(1j * phase)]), (target,), ((control, polarity),))


def basis_state(num_qubits: int, index: int) -> StateVector:
    if not 0 <= index < 2**num_qubits:
        raise ValueError(f"basis index {index} out of range for {num_qubits} qubits")
    amps = np.zeros(2**num_qubits, dtype=complex)
    amps[index] = 1.0
    return StateVector(num_qubits, amps)


def _check_registers(num_qubits: int, registers: Sequence[int]) -> list[int]:
    regs = [int(r) for r in registers]
    if len(set(regs)) != len(regs):
        raise ValueError(f"duplicate qubits in registers {regs}")
    if any(not 0 <= r < num_qubits for r in regs):
        raise ValueError(f"register index out of range for {num_qubits} qubits: {regs}")
    return regs


def _apply_matrix(state: StateVector, matrix: np.ndarray, regs: list[int]) -> StateVector:
    n = state.num_qubits
    k = len(regs)
    axes = [n - 1 - r for r in regs]
    op = matrix.reshape((2,) * (2 * k))
    out = np.tensordot(op, state.tensor(), axes=(list(range(k, 2 * k)), axes))
    out = np.moveaxis(out, list(range(k)), axes)
    return StateVector(n, out.reshape(-1), state.normalized)


def apply_block_unitary(state: StateVector, matrix: np.ndarray, registers: Sequence[int]) -> StateVector:
    """Apply ``matrix`` on ``registers`` (first entry = most significant)."""
    regs = _check_registers(state.num_qubits, registers)
    m = np.asarray(matrix, dtype=complex)
    if m.ndim != 2 or m.shape != (2 ** len(regs),) * 2:
        raise ValueError(f"matrix shape {m.shape} does not act on {len(regs)} qubits")
    return _apply_matrix(state, _check_unitary(m), regs)


def apply_gate(state: StateVector, gate: GateSpec) -> StateVector:
    regs = _check_registers(state.num_qubits, gate.wires())
    return _apply_matrix(state, gate.block_matrix(), regs)


def inner_product(a: StateVector, b: StateVector) -> complex:
    """``<a|b>``, conjugate-linear in ``a``."""
    if a.num_qubits != b.num_qubits:
        raise ValueError(f"dimension mismatch: {a.num_qubits} vs {b.num_qubits} qubits")
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def project_qubit(state: StateVector, qubit: int, outcome: int) -> tuple[StateVector, float]:
    """Unnormalized branch ``P_outcome |psi>`` on ``qubit`` and its probability."""
    if not 0 <= qubit < state.num_qubits:
        raise ValueError(f"qubit {qubit} out of range")
    if outcome not in (0, 1):
        raise ValueError("outcome must be 0 or 1")
    mask = ((np.arange(state.dim) >> qubit) & 1) == outcome
    branch = np.where(mask, state.amplitudes, 0)
    prob = float(np.vdot(branch, branch).real)
    return StateVector(state.num_qubits, branch, normalized=False), prob

"""The five-qubit perfect code: codewords, encoder/decoder, syndrome table.

Register conventions
--------------------
* Code bit 1 is the most significant of the five and carries ``|Q>`` at the
  encoder input; bits 2..5 carry the ancillas ``a, b, c, d``.
* A codeword is written ``|b>|xy>``: the three-qubit Bell-like state sits on
  bits 1..3, the pair ``xy`` on bits 4..5.
* Syndromes are 4-character bit strings ``a'b'c'd'`` with ``a'`` first, so
  the decoder output index is ``16 * q + int(syndrome, 2)``.

The decoder is the conjugate transpose of the encoder. The encoder itself is
fixed column by column from the syndrome table: the input ``|q>|s>`` is sent
to ``E_s`` applied to the logical image of ``R_s^dagger |q>``, so running it
backwards on ``E_s(alpha|0_L> + beta|1_L>)`` yields ``R_s(alpha|0>+beta|1>)``
on ``Q`` and ``|s>`` on the ancillas, signs included.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .pauli import PauliError, all_errors
from .statevec import (
    ATOL,
    I2,
    X,
    Y,
    Z,
    StateVector,
    apply_block_unitary,
    basis_state,
    is_unitary,
)

MINUS = "−"
TABLE_VERSION = 1
ENCODER_REGISTERS = (4, 3, 2, 1, 0)  # Q, a, b, c, d

TRANSFORMS: dict[str, np.ndarray] = {
    "I": I2,
    f"{MINUS}I": -I2,
    "Z": Z,
    f"{MINUS}Z": -Z,
    "iY": 1j * Y,
    f"{MINUS}X": -X,
}

# (error, syndrome a'b'c'd', transform on Q') in the published grouping order.
TABLE1_ROWS: tuple[tuple[str, str, str], ...] = (
    ("None", "0000", "I"),
    ("BS3", "1101", "iY"),
    ("BS5", "1111", f"{MINUS}Z"),
    ("B2", "0001", "Z"),
    ("S3", "1010", "Z"),
    ("S5", "1100", "Z"),
    ("BS2", "0101", "Z"),
    ("B5", "0011", f"{MINUS}I"),
    ("S1", "1000", f"{MINUS}I"),
    ("S2", "0100", f"{MINUS}I"),
    ("S4", "0010", f"{MINUS}I"),
    ("B1", "0110", f"{MINUS}X"),
    ("B3", "0111", f"{MINUS}X"),
    ("B4", "1011", f"{MINUS}X"),
    ("BS1", "1110", f"{MINUS}X"),
    ("BS4", "1001", f"{MINUS}X"),
)

# Bell-like trios b1..b8 as (first, second, relative sign), unnormalized.
BELL_TRIOS = {
    1: (0b000, 0b111, +1),
    2: (0b000, 0b111, -1),
    3: (0b100, 0b011, +1),
    4: (0b100, 0b011, -1),
    5: (0b010, 0b101, +1),
    6: (0b010, 0b101, -1),
    7: (0b110, 0b001, +1),
    8: (0b110, 0b001, -1),
}

# Codeword terms (coefficient, trio, pair bits).
ZERO_L_TERMS = ((+1, 1, 0b00), (-1, 3, 0b11), (+1, 7, 0b10), (+1, 5, 0b01))
ONE_L_TERMS = ((-1, 2, 0b11), (-1, 4, 0b00), (+1, 8, 0b01), (-1, 6, 0b10))


class EncoderConstructionError(ValueError):
    """The error images of the code space are not mutually orthogonal."""


def _normalize_transform_label(label: str) -> str:
    label = label.replace("-", MINUS)
    if label not in TRANSFORMS:
        raise ValueError(f"unknown transform {label!r}")
    return label


def _check_syndrome(syndrome: str) -> str:
    if len(syndrome) != 4 or set(syndrome) - {"0", "1"}:
        raise ValueError(f"syndrome must be a 4-bit string, got {syndrome!r}")
    return syndrome


def render_transform(matrix: np.ndarray) -> str:
    """Write ``matrix @ (alpha|0> + beta|1>)`` the way the table does."""
    terms = []
    for sym, col in (("α", 0), ("β", 1)):
        (row,) = np.flatnonzero(np.abs(matrix[:, col]) > ATOL)
        coeff = matrix[row, col]
        if abs(coeff.imag) > ATOL or abs(abs(coeff.real) - 1) > ATOL:
            raise ValueError("only signed permutation transforms can be rendered")
        sign = MINUS if coeff.real < 0 else "+"
        terms.append(f"{sign}{sym}|{row}⟩")
    text = "".join(terms)
    return text[1:] if text.startswith("+") else text


@dataclass(frozen=True)
class TableRow:
    error: PauliError
    syndrome: str
    transform: str

    @property
    def transform_matrix(self) -> np.ndarray:
        return TRANSFORMS[self.transform]

    @property
    def recovery(self) -> np.ndarray:
        return self.transform_matrix.conj().T

    @property
    def resulting_state(self) -> str:
        return render_transform(self.transform_matrix)


@dataclass(frozen=True)
class CodeTable:
    rows: tuple[TableRow, ...]
    version: int = TABLE_VERSION

    def __post_init__(self):
        rows = tuple(self.rows)
        if len(rows) != 16:
            raise ValueError(f"code table needs 16 rows, got {len(rows)}")
        if sorted(int(r.syndrome, 2) for r in rows) != list(range(16)):
            raise ValueError("syndromes must be the 16 distinct 4-bit values")
        if {r.error for r in rows} != set(all_errors()):
            raise ValueError("errors must be None plus B, S, BS on each of the five bits")
        for r in rows:
            if r.syndrome == "0000" and (r.error.kind != "None" or r.transform != "I"):
                raise ValueError("syndrome 0000 must pair with no error and the identity")
        object.__setattr__(self, "rows", rows)

    @classmethod
    def from_triples(cls, triples) -> CodeTable:
        return cls(
            tuple(
                TableRow(PauliError.parse(e), _check_syndrome(s), _normalize_transform_label(t))
                for e, s, t in triples
            )
        )

    def by_syndrome(self, syndrome: str) -> TableRow:
        for r in self.rows:
            if r.syndrome == syndrome:
                return r
        raise KeyError(f"syndrome {syndrome!r} not in table")

    def by_error(self, error: PauliError | str) -> TableRow:
        if isinstance(error, str):
            error = PauliError.parse(error)
        for r in self.rows:
            if r.error == error:
                return r
        raise KeyError(f"error {error} not in table")

    def to_json(self) -> str:
        payload = {
            "version": self.version,
            "rows": [
                {"error": r.error.label, "syndrome": r.syndrome, "transform": r.transform}
                for r in self.rows
            ],
        }
        return json.dumps(payload, ensure_ascii=False, indent=2)

    @classmethod
    def from_json(cls, text: str) -> CodeTable:
        payload = json.loads(text)
        if payload.get("version") != TABLE_VERSION:
            raise ValueError(f"unsupported table version {payload.get('version')!r}")
        return cls.from_triples((r["error"], r["syndrome"], r["transform"]) for r in payload["rows"])


@lru_cache(maxsize=None)
def default_table() -> CodeTable:
    return CodeTable.from_triples(TABLE1_ROWS)


@dataclass(frozen=True)
class LogicalPair:
    zero_L: np.ndarray = field(repr=False)
    one_L: np.ndarray = field(repr=False)

    def __post_init__(self):
        z = np.array(self.zero_L, dtype=complex).reshape(-1)
        o = np.array(self.one_L, dtype=complex).reshape(-1)
        for name, v in (("zero_L", z), ("one_L", o)):
            if v.size != 32:
                raise ValueError(f"{name} must have 32 amplitudes")
            if abs(np.vdot(v, v).real - 1) > ATOL:
                raise ValueError(f"{name} is not normalized")
        if abs(np.vdot(z, o)) > ATOL:
            raise ValueError("codewords are not orthogonal")
        z.flags.writeable = False
        o.flags.writeable = False
        object.__setattr__(self, "zero_L", z)
        object.__setattr__(self, "one_L", o)

    def columns(self) -> np.ndarray:
        """``32 x 2`` matrix whose columns are ``|0_L>`` and ``|1_L>``."""
        return np.stack([self.zero_L, self.one_L], axis=1)

    def negative_counts(self) -> tuple[int, int]:
        return (
            int(np.sum(self.zero_L.real < -ATOL)),
            int(np.sum(self.one_L.real < -ATOL)),
        )

    def state(self, which: int) -> StateVector:
        return StateVector(5, self.zero_L if which == 0 else self.one_L)


def _expand(terms) -> np.ndarray:
    amps = np.zeros(32, dtype=complex)
    for coeff, trio, pair in terms:
        first, second, rel = BELL_TRIOS[trio]
        amps[(first << 2) | pair] += coeff
        amps[(second << 2) | pair] += coeff * rel
    return amps / np.sqrt(8)


@lru_cache(maxsize=None)
def logical_states() -> LogicalPair:
    return LogicalPair(_expand(ZERO_L_TERMS), _expand(ONE_L_TERMS))


def error_images(logical: LogicalPair | None = None, errors=None) -> np.ndarray:
    """``32 x 2m`` matrix with columns ``E|0_L>, E|1_L>`` for each error ``E``."""
    logical = logical or logical_states()
    errors = all_errors() if errors is None else errors
    basis = logical.columns()
    return np.concatenate([e.matrix() @ basis for e in errors], axis=1)


@dataclass(frozen=True)
class EncoderUnitary:
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.shape != (32, 32) or not is_unitary(m):
            raise EncoderConstructionError("encoder matrix is not a 32x32 unitary")
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)

    @property
    def decoder(self) -> np.ndarray:
        return self.matrix.conj().T


def build_encoder(table: CodeTable | None = None, logical: LogicalPair | None = None) -> EncoderUnitary:
    table = table or default_table()
    logical = logical or logical_states()
    basis = logical.columns()
    u = np.zeros((32, 32), dtype=complex)
    for row in table.rows:
        s = int(row.syndrome, 2)
        # Column q of (basis @ R^dagger) is the logical image of R^dagger|q>.
        u[:, [s, 16 + s]] = row.error.matrix() @ basis @ row.recovery
    if not is_unitary(u):
        dev = np.max(np.abs(u.conj().T @ u - np.eye(32)))
        raise EncoderConstructionError(
            f"error images of the code space are not orthonormal (max deviation {dev:.3e})"
        )
    return EncoderUnitary(u)


@lru_cache(maxsize=None)
def default_encoder() -> EncoderUnitary:
    return build_encoder()


def qubit_state(alpha: complex, beta: complex) -> StateVector:
    if abs(abs(alpha) ** 2 + abs(beta) ** 2 - 1) > 1e-9:
        raise ValueError("|alpha|^2 + |beta|^2 must equal 1")
    return StateVector(1, np.array([alpha, beta], dtype=complex) / np.hypot(abs(alpha), abs(beta)))


def encode(alpha: complex, beta: complex, encoder: EncoderUnitary | None = None) -> StateVector:
    """Run ``|Q>|0000>`` through the encoder, giving ``alpha|0_L> + beta|1_L>``."""
    encoder = encoder or default_encoder()
    inp = qubit_state(alpha, beta).kron(basis_state(4, 0))
    return apply_block_unitary(inp, encoder.matrix, ENCODER_REGISTERS)


class Branch(NamedTuple):
    syndrome: str
    probability: float
    q_state: StateVector


def decode_and_diagnose(state: StateVector, encoder: EncoderUnitary | None = None) -> list[Branch]:
    """Run the encoder backwards and split on the 16 ancilla outcomes.

    Branches come in syndrome order ``0000 .. 1111``. ``q_state`` is the
    normalized conditional state of ``Q'``; for a zero-probability branch it
    is the (unnormalized) zero vector.
    """
    if state.num_qubits != 5:
        raise ValueError("decoder acts on five qubits")
    encoder = encoder or default_encoder()
    out = apply_block_unitary(state, encoder.decoder, ENCODER_REGISTERS).amplitudes.reshape(2, 16)
    branches = []
    for s in range(16):
        q = out[:, s]
        prob = float(np.vdot(q, q).real)
        if prob > ATOL**2:
            q_state = StateVector(1, q / np.sqrt(prob))
        else:
            q_state = StateVector(1, np.zeros(2), normalized=False)
        branches.append(Branch(format(s, "04b"), prob, q_state))
    return branches


def recover(q_state: StateVector, syndrome: str, table: CodeTable | None = None) -> StateVector:
    table = table or default_table()
    rec = table.by_syndrome(syndrome).recovery
    return apply_block_unitary(q_state, rec, [0])


def syndrome_table(table: CodeTable | None = None) -> list[tuple[str, str, str]]:
    """``(error, syndrome, resulting state)`` rows in table order."""
    table = table or default_table()
    return [(r.error.label, r.syndrome, r.resulting_state) for r in table.rows]

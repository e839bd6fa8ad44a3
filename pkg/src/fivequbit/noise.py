"""Error injection and fidelity experiments.

Each code bit couples to its own environment qubit, which starts in ``|0>``.
On ten qubits the code register occupies qubits 0..4 (code bit ``k`` on qubit
``5 - k``) and the environment of bit ``k`` sits on qubit ``10 - k``, so a
full amplitude index reads ``32 * env + code``.

Environments are traced out by summing over their computational-basis
outcomes; nothing here samples.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import code5
from .pauli import NUM_CODE_BITS, PauliError, bit_to_qubit
from .statevec import ATOL, X, Y, Z, StateVector, apply_block_unitary, basis_state

ISOTROPIC = np.kron(X, X) + np.kron(Y, Y) + np.kron(Z, Z)

DEFAULT_INPUTS = (
    (1.0, 0.0),
    (1 / math.sqrt(2), 1 / math.sqrt(2)),
    (1 / math.sqrt(2), 1j / math.sqrt(2)),
)
SCALING_WINDOW = (1e-4, 1e-2)


def default_theta_grid() -> list[float]:
    return [float(t) for t in np.geomspace(1e-2, 0.5, 16)]


def random_hermitian(rng: np.random.Generator, dim: int = 4) -> np.ndarray:
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return (a + a.conj().T) / 2


def pauli_error(error: PauliError, state: StateVector) -> StateVector:
    return error.apply(state)


@dataclass(frozen=True)
class EnvChannel:
    """Joint evolution ``exp(-i * theta * generator)`` of one qubit and its environment.

    The generator acts on ``system (x) environment`` with the system as the
    high-order factor. Leaving ``generator`` unset picks the isotropic
    Heisenberg coupling, or a random Hermitian matrix when ``seed`` is given.
    """

    coupling_strength: float
    generator: np.ndarray | None = field(default=None, repr=False)
    seed: int | None = None

    def __post_init__(self):
        if self.coupling_strength < 0:
            raise ValueError("coupling strength must be nonnegative")
        if self.generator is None:
            if self.seed is None:
                gen = ISOTROPIC
            else:
                gen = random_hermitian(np.random.default_rng(self.seed))
        else:
            gen = np.array(self.generator, dtype=complex)
        if gen.shape != (4, 4):
            raise ValueError(f"generator must be 4x4, got {gen.shape}")
        if np.max(np.abs(gen - gen.conj().T)) > ATOL:
            raise ValueError("generator is not Hermitian")
        gen = np.array(gen, dtype=complex)
        gen.flags.writeable = False
        object.__setattr__(self, "generator", gen)

    @classmethod
    def idle(cls) -> EnvChannel:
        return cls(0.0)


def env_interaction(channel: EnvChannel) -> np.ndarray:
    w, v = np.linalg.eigh(channel.generator)
    return (v * np.exp(-1j * channel.coupling_strength * w)) @ v.conj().T


@dataclass(frozen=True)
class EnvDecomposition:
    """Environment states reached from ``|e> = |0>``.

    ``e0, e0b`` come from system ``|0>`` (staying / flipped), ``e1, e1b``
    from system ``|1>``. The ``plus``/``minus`` combinations weight the
    ``I, Z, X, -iY`` branches.
    """

    e0: np.ndarray
    e0b: np.ndarray
    e1: np.ndarray
    e1b: np.ndarray

    @property
    def e_plus(self):
        return (self.e0 + self.e1) / 2

    @property
    def e_minus(self):
        return (self.e0 - self.e1) / 2

    @property
    def eb_plus(self):
        return (self.e0b + self.e1b) / 2

    @property
    def eb_minus(self):
        return (self.e0b - self.e1b) / 2

    def branches(self) -> list[tuple[np.ndarray, np.ndarray]]:
        """``(environment vector, system operator)`` pairs summing to the interaction."""
        return [
            (self.e_plus, np.eye(2)),
            (self.e_minus, Z),
            (self.eb_plus, X),
            (-self.eb_minus, 1j * Y),
        ]

    def reconstruct(self) -> np.ndarray:
        """``4 x 2`` map ``|x> -> V(|x>|e>)`` rebuilt from the four branches."""
        out = np.zeros((4, 2), dtype=complex)
        for env, op in self.branches():
            out += np.kron(op, env.reshape(2, 1))
        return out


def decompose_interaction(v: np.ndarray) -> EnvDecomposition:
    t = np.asarray(v).reshape(2, 2, 2, 2)  # sys', env', sys, env
    col0 = t[:, :, 0, 0]
    col1 = t[:, :, 1, 0]
    return EnvDecomposition(e0=col0[0], e0b=col0[1], e1=col1[1], e1b=col1[0])


def apply_env_noise(encoded: StateVector, channels: Sequence[EnvChannel]) -> StateVector:
    if encoded.num_qubits != NUM_CODE_BITS:
        raise ValueError("expected a five-qubit encoded state")
    if len(channels) != NUM_CODE_BITS:
        raise ValueError(f"need {NUM_CODE_BITS} channels, got {len(channels)}")
    state = basis_state(NUM_CODE_BITS, 0).kron(encoded)
    for bit, ch in enumerate(channels, start=1):
        if ch.coupling_strength == 0:
            continue
        sys_q = bit_to_qubit(bit)
        env_q = sys_q + NUM_CODE_BITS
        state = apply_block_unitary(state, env_interaction(ch), [sys_q, env_q])
    return state


def _orthogonal(alpha: complex, beta: complex) -> np.ndarray:
    a, b = code5.qubit_state(alpha, beta).amplitudes
    return np.array([-np.conj(b), np.conj(a)])


def corrected_infidelity(
    alpha: complex,
    beta: complex,
    channels: Sequence[EnvChannel],
    encoder: code5.EncoderUnitary | None = None,
    table: code5.CodeTable | None = None,
) -> float:
    """``1 - F`` after encode, noise, decode and per-syndrome recovery.

    Summed as the weight left orthogonal to the input, which keeps full
    relative precision when the infidelity is tiny.
    """
    table = table or code5.default_table()
    encoder = encoder or code5.default_encoder()
    noisy = apply_env_noise(code5.encode(alpha, beta, encoder), channels)
    decoded = apply_block_unitary(noisy, encoder.decoder, code5.ENCODER_REGISTERS)
    amps = decoded.amplitudes.reshape(32, 2, 16)  # env, Q', syndrome
    perp = _orthogonal(alpha, beta).conj()
    total = 0.0
    for row in table.rows:
        q = amps[:, :, int(row.syndrome, 2)] @ row.recovery.T
        total += float(np.sum(np.abs(q @ perp) ** 2))
    return total


def corrected_fidelity(alpha, beta, channels, encoder=None, table=None) -> float:
    return min(1.0, max(0.0, 1.0 - corrected_infidelity(alpha, beta, channels, encoder, table)))


def unencoded_infidelity(alpha: complex, beta: complex, channel: EnvChannel) -> float:
    joint = apply_block_unitary(code5.qubit_state(alpha, beta).kron(basis_state(1, 0)), env_interaction(channel), [1, 0])
    amps = joint.amplitudes.reshape(2, 2)  # system, env
    perp = _orthogonal(alpha, beta).conj()
    return float(np.sum(np.abs(perp @ amps) ** 2))


def unencoded_fidelity(alpha, beta, channel) -> float:
    return min(1.0, max(0.0, 1.0 - unencoded_infidelity(alpha, beta, channel)))


@dataclass(frozen=True)
class SweepRecord:
    theta: float
    p: float
    f_unencoded: float
    f_corrected: float
    # 1 - f_corrected at full relative precision.
    q: float = field(default=0.0, repr=False)


@dataclass(frozen=True)
class ScalingFit:
    slope_corrected: float
    slope_unencoded: float
    c: float
    p_star: float
    crossover_p: float | None
    points: int


@dataclass(frozen=True)
class SweepResult:
    records: list[SweepRecord]
    fit: ScalingFit | None

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["theta", "p", "f_unencoded", "f_corrected"])
        for r in self.records:
            w.writerow([_fmt(r.theta), _fmt(r.p), _fmt(r.f_unencoded), _fmt(r.f_corrected)])
        return buf.getvalue()

    def to_json(self) -> str:
        payload = {
            "records": [
                {
                    "theta": _num(r.theta),
                    "p": _num(r.p),
                    "f_unencoded": _num(r.f_unencoded),
                    "f_corrected": _num(r.f_corrected),
                }
                for r in self.records
            ],
            "fit": None if self.fit is None else {
                "slope_corrected": _num(self.fit.slope_corrected),
                "slope_unencoded": _num(self.fit.slope_unencoded),
                "c": _num(self.fit.c),
                "p_star": _num(self.fit.p_star),
                "crossover_p": None if self.fit.crossover_p is None else _num(self.fit.crossover_p),
                "points": self.fit.points,
            },
        }
        return json.dumps(payload, indent=2)


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def _num(x: float) -> float:
    return float(_fmt(x))


def resolve_generator(config="isotropic", seed: int = 0) -> np.ndarray:
    """``"isotropic"``, ``"random"`` (seeded), or an explicit 4x4 Hermitian matrix."""
    if isinstance(config, str):
        if config == "isotropic":
            return ISOTROPIC
        if config == "random":
            return random_hermitian(np.random.default_rng(seed))
        raise ValueError(f"unknown generator config {config!r}")
    return np.asarray(config, dtype=complex)


def fidelity_sweep(
    theta_grid: Sequence[float],
    generator_config="isotropic",
    input_states: Sequence[tuple[complex, complex]] = DEFAULT_INPUTS,
    seed: int = 0,
) -> SweepResult:
    """Compare one bare qubit with the encoded one, all five bits coupled alike.

    ``p`` is the bare-qubit infidelity at the same ``theta``; both columns are
    averaged over ``input_states``.
    """
    grid = [float(t) for t in theta_grid]
    if not grid:
        raise ValueError("theta grid is empty")
    if any(t < 0 for t in grid) or grid != sorted(grid):
        raise ValueError("theta grid must be nonnegative and sorted")
    if not input_states:
        raise ValueError("need at least one input state")
    gen = resolve_generator(generator_config, seed)
    encoder = code5.default_encoder()
    records = []
    for theta in grid:
        ch = EnvChannel(theta, gen)
        p = float(np.mean([unencoded_infidelity(a, b, ch) for a, b in input_states]))
        q = float(np.mean([corrected_infidelity(a, b, [ch] * NUM_CODE_BITS, encoder) for a, b in input_states]))
        records.append(SweepRecord(theta, p, 1.0 - p, 1.0 - q, q))
    return SweepResult(records, fit_scaling(records))


def fit_scaling(records: Sequence[SweepRecord], window: tuple[float, float] = SCALING_WINDOW) -> ScalingFit | None:
    """Log-log slopes and ``1 - F_corrected ~ c p^2`` over ``window`` in ``p``.

    ``p_star = 1 / c`` is where ``c p^2`` meets ``p``; ``crossover_p`` is the
    first crossing actually seen on the grid, interpolated in ``log p``.
    Returns ``None`` when fewer than two records fall in the window.
    """
    lo, hi = window
    sel = [r for r in records if lo <= r.p <= hi and r.q > 0]
    if len(sel) < 2:
        return None
    lp = np.log([r.p for r in sel])
    slope_c = float(np.polyfit(lp, np.log([r.q for r in sel]), 1)[0])
    slope_u = float(np.polyfit(lp, np.log([1.0 - r.f_unencoded for r in sel]), 1)[0])
    p = np.array([r.p for r in sel])
    q = np.array([r.q for r in sel])
    c = float(np.sum(q * p**2) / np.sum(p**4))
    return ScalingFit(slope_c, slope_u, c, 1.0 / c, _crossover(records), len(sel))


def _crossover(records: Sequence[SweepRecord]) -> float | None:
    prev = None
    for r in records:
        if r.p <= 0:
            continue
        d = math.log(r.q / r.p) if r.q > 0 else -math.inf
        if prev is not None and prev[1] < 0 <= d and math.isfinite(prev[1]):
            lp0, d0 = prev
            lp1 = math.log(r.p)
            return math.exp(lp0 + (lp1 - lp0) * (-d0) / (d - d0))
        prev = (math.log(r.p), d)
    return None

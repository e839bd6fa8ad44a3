"""Randomized and exhaustive self-checks behind ``fivequbit verify``.

Random draws come from ``numpy.random.default_rng(seed)`` (PCG64) in a fixed
order, so a seed pins every report byte for byte.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import code5, codesearch, noise
from .pauli import NUM_CODE_BITS, all_errors
from .statevec import ATOL


@dataclass(frozen=True)
class SuiteResult:
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} {self.name}: {self.detail}"


def random_qubit(rng: np.random.Generator) -> tuple[complex, complex]:
    v = rng.normal(size=2) + 1j * rng.normal(size=2)
    v /= np.linalg.norm(v)
    return complex(v[0]), complex(v[1])


def random_single_channel(rng: np.random.Generator) -> tuple[int, noise.EnvChannel]:
    bit = int(rng.integers(1, NUM_CODE_BITS + 1))
    theta = float(rng.uniform(0, np.pi))
    return bit, noise.EnvChannel(theta, noise.random_hermitian(rng))


def suite_round_trip(rng, trials) -> SuiteResult:
    worst = 0.0
    ok = True
    for _ in range(trials):
        a, b = random_qubit(rng)
        branches = code5.decode_and_diagnose(code5.encode(a, b))
        top = branches[0]
        ok &= top.syndrome == "0000" and abs(top.probability - 1) < ATOL
        worst = max(worst, float(np.max(np.abs(top.q_state.amplitudes - [a, b]))))
    ok &= worst < ATOL
    return SuiteResult("round_trip", ok, f"trials={trials} max_err={worst:.2e}")


def suite_single_error_correction(rng, trials) -> SuiteResult:
    table = code5.default_table()
    worst = 0.0
    ok = True
    for _ in range(trials):
        a, b = random_qubit(rng)
        logical = code5.encode(a, b)
        for err in all_errors():
            live = [br for br in code5.decode_and_diagnose(err.apply(logical)) if br.probability > ATOL]
            if len(live) != 1 or live[0].syndrome != table.by_error(err).syndrome:
                ok = False
                continue
            out = code5.recover(live[0].q_state, live[0].syndrome, table)
            worst = max(worst, float(np.max(np.abs(out.amplitudes - [a, b]))))
    ok &= worst < ATOL
    return SuiteResult("single_error_correction", ok, f"errors=16 trials={trials} max_err={worst:.2e}")


def suite_gram_identity(rng, trials) -> SuiteResult:
    report = codesearch.check_qec(codesearch.reference_candidate())
    enc = code5.default_encoder().matrix
    unit = float(np.max(np.abs(enc.conj().T @ enc - np.eye(32))))
    ok = report.verdict and unit < ATOL
    return SuiteResult(
        "gram_identity",
        ok,
        f"max_off_diagonal={report.max_off_diagonal:.2e} encoder_unitarity={unit:.2e}",
    )


def suite_balance(rng, trials) -> SuiteResult:
    passed, violations = codesearch.check_balance(codesearch.reference_candidate())
    return SuiteResult("balance", passed, f"pairs=25 codewords=2 violations={len(violations)}")


def suite_env_decomposition(rng, trials) -> SuiteResult:
    worst = 0.0
    for _ in range(trials):
        ch = noise.EnvChannel(float(rng.uniform(0, np.pi)), noise.random_hermitian(rng))
        v = noise.env_interaction(ch)
        d = noise.decompose_interaction(v)
        errs = [
            np.max(np.abs(d.reconstruct() - v[:, [0, 2]])),
            abs(np.vdot(d.e0, d.e0) + np.vdot(d.e0b, d.e0b) - 1),
            abs(np.vdot(d.e1, d.e1) + np.vdot(d.e1b, d.e1b) - 1),
            abs(np.vdot(d.e0, d.e1b) + np.vdot(d.e0b, d.e1)),
        ]
        worst = max(worst, float(max(errs)))
    return SuiteResult("env_decomposition", worst < ATOL, f"trials={trials} max_err={worst:.2e}")


def suite_general_interaction(rng, trials) -> SuiteResult:
    n = min(trials, 50)
    worst = 0.0
    for _ in range(n):
        a, b = random_qubit(rng)
        bit, ch = random_single_channel(rng)
        channels = [noise.EnvChannel.idle()] * NUM_CODE_BITS
        channels[bit - 1] = ch
        worst = max(worst, noise.corrected_infidelity(a, b, channels))
    return SuiteResult("general_interaction", worst < ATOL, f"trials={n} max_infidelity={worst:.2e}")


SUITES: list[Callable[[np.random.Generator, int], SuiteResult]] = [
    suite_round_trip,
    suite_single_error_correction,
    suite_gram_identity,
    suite_balance,
    suite_env_decomposition,
    suite_general_interaction,
]


def run_all(trials: int = 100, seed: int = 0) -> list[SuiteResult]:
    rng = np.random.default_rng(seed)
    return [suite(rng, trials) for suite in SUITES]

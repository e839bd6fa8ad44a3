"""Exit criteria. Each test prints one PASS/FAIL line; the lines are also
collected into the pytest terminal summary."""

import math
import subprocess
import sys
import time

import numpy as np
import pytest

from fivequbit import code5, codesearch, noise
from fivequbit.cli import RunConfig, run
from fivequbit.pauli import all_errors

from conftest import ACCEPTANCE_LINES, random_qubit

pytestmark = pytest.mark.acceptance

TOL = 1e-12


def report(number, name, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] {number}. {name}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def infer_transform(q, inp):
    """Signed permutation M with q = M @ inp; needs |inp[0]| != |inp[1]|."""
    m = np.zeros((2, 2))
    for r in range(2):
        for c in range(2):
            if abs(abs(q[r]) - abs(inp[c])) < TOL:
                m[r, c] = round((q[r] / inp[c]).real)
    return m


def test_1_table_reproduction():
    expected = {
        ("None", "0000", "α|0⟩+β|1⟩"),
        ("BS3", "1101", "−α|1⟩+β|0⟩"),
        ("BS5", "1111", "−α|0⟩+β|1⟩"),
        ("B2", "0001", "α|0⟩−β|1⟩"),
        ("S3", "1010", "α|0⟩−β|1⟩"),
        ("S5", "1100", "α|0⟩−β|1⟩"),
        ("BS2", "0101", "α|0⟩−β|1⟩"),
        ("B5", "0011", "−α|0⟩−β|1⟩"),
        ("S1", "1000", "−α|0⟩−β|1⟩"),
        ("S2", "0100", "−α|0⟩−β|1⟩"),
        ("S4", "0010", "−α|0⟩−β|1⟩"),
        ("B1", "0110", "−α|1⟩−β|0⟩"),
        ("B3", "0111", "−α|1⟩−β|0⟩"),
        ("B4", "1011", "−α|1⟩−β|0⟩"),
        ("BS1", "1110", "−α|1⟩−β|0⟩"),
        ("BS4", "1001", "−α|1⟩−β|0⟩"),
    }
    t0 = time.perf_counter()
    status, text, _ = run(RunConfig("table"))
    elapsed = time.perf_counter() - t0
    rows = [tuple(line.split(" ")) for line in text.splitlines()]
    # Regenerate each row by simulation: the decoded Q' of E(a|0_L> + b|1_L>)
    # must be the printed signed permutation of (a, b).
    a, b = 0.6, 0.8j
    simulated = set()
    for err in all_errors():
        (br,) = [x for x in code5.decode_and_diagnose(err.apply(code5.encode(a, b))) if x.probability > TOL]
        simulated.add((err.label, br.syndrome, code5.render_transform(infer_transform(br.q_state.amplitudes, (a, b)))))
    ok = (
        status == 0 and len(rows) == 16 and set(rows) == expected
        and simulated == expected and elapsed < 1.0
    )
    report(
        1,
        "Table 1 reproduction",
        ok,
        f"rows={len(rows)} printed_matched={len(set(rows) & expected)} "
        f"simulated_matched={len(simulated & expected)} time={elapsed:.3f}s",
    )


def test_2_perfect_single_error_correction():
    rng = np.random.default_rng(2)
    table = code5.default_table()
    t0 = time.perf_counter()
    worst = 0.0
    deterministic = True
    for _ in range(100):
        a, b = random_qubit(rng)
        logical = code5.encode(a, b)
        for err in all_errors():
            live = [br for br in code5.decode_and_diagnose(err.apply(logical)) if br.probability > TOL]
            deterministic &= len(live) == 1
            out = code5.recover(live[0].q_state, live[0].syndrome, table)
            worst = max(worst, float(np.max(np.abs(out.amplitudes - [a, b]))))
    elapsed = time.perf_counter() - t0
    ok = deterministic and worst < TOL and elapsed < 5.0
    report(2, "perfect single-error correction", ok, f"16x100 max_err={worst:.2e} time={elapsed:.2f}s")


def test_3_general_one_qubit_interaction():
    rng = np.random.default_rng(3)
    t0 = time.perf_counter()
    worst = 0.0
    for _ in range(50):
        a, b = random_qubit(rng)
        bit = int(rng.integers(1, 6))
        channels = [noise.EnvChannel.idle()] * 5
        channels[bit - 1] = noise.EnvChannel(float(rng.uniform(0, np.pi)), noise.random_hermitian(rng))
        worst = max(worst, abs(1 - noise.corrected_fidelity(a, b, channels)))
    elapsed = time.perf_counter() - t0
    ok = worst < TOL and elapsed < 30.0
    report(3, "general one-qubit interaction", ok, f"50 couplings max|1-F|={worst:.2e} time={elapsed:.2f}s")


def test_4_gram_identity():
    rep = codesearch.check_qec(codesearch.reference_candidate())
    dev = float(np.max(np.abs(rep.gram - np.eye(32))))
    report(4, "Gram identity", rep.verdict and dev < TOL, f"max deviation={dev:.2e}")


def test_5_balance_exact():
    cand = codesearch.reference_candidate()
    ok, violations = codesearch.check_balance(cand)
    checked = 0
    for support in (cand.support0, cand.support1):
        for k in range(1, 6):
            for l in range(1, 6):
                sums = codesearch.parity_class_sums(support, k, l)
                checked += 1
                if k != l:
                    ok &= len(set(sums)) == 1
                else:
                    ok &= sums[0] == sums[3]
    report(5, "balance conditions", ok and checked == 50, f"pairs=25 per codeword, violations={len(violations)}")


def test_6_dimension_bound():
    rows = {r.n: r for r in codesearch.min_code_length(10)}
    r4, r5 = rows[4], rows[5]
    best = codesearch.smallest_feasible(rows.values())
    ok = (
        (r4.subspaces_needed, r4.dimension, r4.feasible) == (26, 16, False)
        and (r5.subspaces_needed, r5.dimension, r5.feasible, r5.saturates) == (32, 32, True, True)
        and best.n == 5
    )
    report(6, "dimension bound", ok, f"{r4.render()}; {r5.render()}")


def test_7_fidelity_scaling():
    t0 = time.perf_counter()
    fit = noise.fidelity_sweep(noise.default_theta_grid()).fit
    elapsed = time.perf_counter() - t0
    ok = (
        fit is not None
        and 1.8 <= fit.slope_corrected <= 2.2
        and 0.9 <= fit.slope_unencoded <= 1.1
        and 0 < fit.p_star and math.isfinite(fit.p_star)
        and elapsed < 120
    )
    report(
        7,
        "fidelity scaling",
        ok,
        f"slope_corrected={fit.slope_corrected:.4f} slope_unencoded={fit.slope_unencoded:.4f} "
        f"c={fit.c:.3f} p*={fit.p_star:.4g} points={fit.points} time={elapsed:.2f}s",
    )


def test_8_sign_search():
    ref = codesearch.reference_candidate()
    t0 = time.perf_counter()
    found = codesearch.search_signs(ref.support0, ref.support1)
    elapsed = time.perf_counter() - t0
    counts = {tuple(sorted(c.negative_counts())) for c in found}
    ok = bool(found) and ref.canonical() in found and counts == {(2, 4)} and elapsed < 60
    report(8, "sign-search rediscovery", ok, f"patterns={len(found)} counts={sorted(counts)} time={elapsed:.2f}s")


def test_9_determinism(tmp_path):
    outs = []
    for i in range(2):
        path = tmp_path / f"verify{i}.txt"
        proc = subprocess.run([sys.executable, "-m", "fivequbit", "verify", "--seed", "0", "--out", str(path)])
        assert proc.returncode == 0
        outs.append(path.read_bytes())
    report(9, "determinism", outs[0] == outs[1] and len(outs[0]) > 0, f"report bytes={len(outs[0])}")

"""Constraint checks and exhaustive sign search for five-bit codes.

A candidate code puts equal-modulus real amplitudes ``+-1/sqrt(m)`` on a
support of ``m`` basis states for each logical word. Bit ``k`` (1..5) of a
basis index follows the code convention: bit 1 is the most significant.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from . import code5
from .pauli import NUM_CODE_BITS, all_errors, bit_to_qubit
from .statevec import ATOL

DIM = 2**NUM_CODE_BITS


@dataclass(frozen=True)
class CodeCandidate:
    support0: tuple[int, ...]
    support1: tuple[int, ...]
    signs0: tuple[int, ...]
    signs1: tuple[int, ...]

    def __post_init__(self):
        for sup, sig in ((self.support0, self.signs0), (self.support1, self.signs1)):
            if len(set(sup)) != len(sup) or not sup:
                raise ValueError("support indices must be distinct and nonempty")
            if any(not 0 <= i < DIM for i in sup):
                raise ValueError(f"support indices must lie in 0..{DIM - 1}")
            if len(sig) != len(sup) or any(s not in (1, -1) for s in sig):
                raise ValueError("need one +1/-1 sign per support index")
        # Keep supports sorted with signs aligned so equal codes compare equal.
        for name in ("0", "1"):
            sup = getattr(self, "support" + name)
            sig = getattr(self, "signs" + name)
            pairs = sorted(zip(sup, sig))
            object.__setattr__(self, "support" + name, tuple(int(i) for i, _ in pairs))
            object.__setattr__(self, "signs" + name, tuple(int(s) for _, s in pairs))

    @classmethod
    def from_amplitudes(cls, zero_L: np.ndarray, one_L: np.ndarray) -> CodeCandidate:
        parts = []
        for v in (np.asarray(zero_L), np.asarray(one_L)):
            sup = np.flatnonzero(np.abs(v) > ATOL)
            parts.append((tuple(sup.tolist()), tuple(int(np.sign(v[i].real)) for i in sup)))
        return cls(parts[0][0], parts[1][0], parts[0][1], parts[1][1])

    def amplitudes(self) -> tuple[np.ndarray, np.ndarray]:
        out = []
        for sup, sig in ((self.support0, self.signs0), (self.support1, self.signs1)):
            v = np.zeros(DIM)
            v[list(sup)] = np.array(sig) / np.sqrt(len(sup))
            out.append(v)
        return out[0], out[1]

    def negative_counts(self) -> tuple[int, int]:
        return self.signs0.count(-1), self.signs1.count(-1)

    def sign_key(self) -> tuple[int, int]:
        """Bitmasks of negative positions; bit ``i`` marks ``signs[i] == -1``."""
        return _mask(self.signs0), _mask(self.signs1)

    def canonical(self) -> CodeCandidate:
        """Representative of the class under an overall sign on each word.

        Picks the sign with fewer minus signs; on a tie the first amplitude
        is made positive.
        """
        return CodeCandidate(self.support0, self.support1, _canon(self.signs0), _canon(self.signs1))

    def permute_bits(self, perm: Sequence[int]) -> CodeCandidate:
        """Move code bit ``k`` to position ``perm[k - 1]`` (both 1-based)."""
        return CodeCandidate(
            tuple(permute_index(i, perm) for i in self.support0),
            tuple(permute_index(i, perm) for i in self.support1),
            self.signs0,
            self.signs1,
        )

    def to_dict(self) -> dict:
        n0, n1 = self.negative_counts()
        return {
            "support0": list(self.support0),
            "signs0": list(self.signs0),
            "support1": list(self.support1),
            "signs1": list(self.signs1),
            "negative_counts": [n0, n1],
        }


def _mask(signs: Sequence[int]) -> int:
    return sum(1 << i for i, s in enumerate(signs) if s < 0)


def _canon(signs: tuple[int, ...]) -> tuple[int, ...]:
    neg = signs.count(-1)
    if 2 * neg > len(signs) or (2 * neg == len(signs) and signs[0] < 0):
        return tuple(-s for s in signs)
    return signs


def _bit(index: int, k: int) -> int:
    return (index >> bit_to_qubit(k)) & 1


def permute_index(index: int, perm: Sequence[int]) -> int:
    if sorted(perm) != list(range(1, NUM_CODE_BITS + 1)):
        raise ValueError(f"not a permutation of 1..{NUM_CODE_BITS}: {perm}")
    out = 0
    for k, target in enumerate(perm, start=1):
        out |= _bit(index, k) << bit_to_qubit(target)
    return out


def reference_candidate() -> CodeCandidate:
    pair = code5.logical_states()
    return CodeCandidate.from_amplitudes(pair.zero_L.real, pair.one_L.real)


class BalanceViolation(NamedTuple):
    codeword: int
    k: int
    l: int
    # Support counts in classes (k even, l even), (even, odd), (odd, even), (odd, odd).
    sums: tuple[int, int, int, int]


def parity_class_sums(support: Sequence[int], k: int, l: int) -> tuple[int, int, int, int]:
    """Support counts per (bit ``k``, bit ``l``) parity class.

    Every amplitude has the same modulus, so these integers are the squared
    weights in units of ``1/len(support)``.
    """
    sums = [0, 0, 0, 0]
    for i in support:
        sums[2 * _bit(i, k) + _bit(i, l)] += 1
    return tuple(sums)


def _balanced(sums: tuple[int, int, int, int], same_bit: bool) -> bool:
    if same_bit:
        # Only (even, even) and (odd, odd) can be populated when k == l.
        return sums[0] == sums[3]
    return len(set(sums)) == 1


def check_balance(candidate: CodeCandidate) -> tuple[bool, list[BalanceViolation]]:
    violations = []
    for word, support in enumerate((candidate.support0, candidate.support1)):
        for k, l in itertools.product(range(1, NUM_CODE_BITS + 1), repeat=2):
            sums = parity_class_sums(support, k, l)
            if not _balanced(sums, k == l):
                violations.append(BalanceViolation(word, k, l, sums))
    return not violations, violations


@dataclass(frozen=True)
class GramReport:
    gram: np.ndarray = field(repr=False)
    max_off_diagonal: float
    max_diagonal_deviation: float
    verdict: bool


def _error_stack() -> np.ndarray:
    # All 16 operators are real signed permutations.
    return np.stack([e.matrix().real for e in all_errors()])


def gram_report(images: np.ndarray, tol: float = ATOL) -> GramReport:
    g = images.conj().T @ images
    off = g - np.diag(np.diag(g))
    max_off = float(np.max(np.abs(off)))
    max_diag = float(np.max(np.abs(np.diag(g) - 1)))
    return GramReport(g, max_off, max_diag, max_off < tol and max_diag < tol)


def check_qec(candidate: CodeCandidate, tol: float = ATOL) -> GramReport:
    """Gram matrix of ``E|0_L>, E|1_L>`` over the 16 single-bit errors."""
    z, o = candidate.amplitudes()
    basis = np.stack([z, o], axis=1)
    images = np.concatenate([op @ basis for op in _error_stack()], axis=1)
    return gram_report(images, tol)


def _batch_verdicts(amps: np.ndarray, ops: np.ndarray, tol: float) -> np.ndarray:
    """``amps`` has shape ``(B, 32, 2)``; returns a boolean verdict per row."""
    imgs = np.matmul(ops[None], amps[:, None])  # (B, 16, 32, 2)
    imgs = imgs.transpose(0, 2, 1, 3).reshape(amps.shape[0], DIM, -1)
    g = np.matmul(imgs.transpose(0, 2, 1), imgs)
    dev = np.abs(g - np.eye(g.shape[-1]))
    return dev.reshape(amps.shape[0], -1).max(axis=1) < tol


def _sign_table(m: int) -> np.ndarray:
    """All sign vectors of length ``m`` with the first entry fixed to +1."""
    masks = np.arange(2 ** (m - 1))
    bits = (masks[:, None] >> np.arange(m - 1)) & 1
    return np.concatenate([np.ones((masks.size, 1)), 1 - 2 * bits], axis=1)


def search_signs(
    support0: Sequence[int],
    support1: Sequence[int],
    prune: bool = True,
    tol: float = ATOL,
    chunk: int = 2048,
) -> list[CodeCandidate]:
    """Every sign assignment on the given supports that passes ``check_qec``.

    Overall signs of each word are quotiented out before testing, and the
    survivors are reported in canonical form sorted by ``sign_key``.
    """
    probe = CodeCandidate(tuple(support0), tuple(support1), (1,) * len(support0), (1,) * len(support1))
    if prune and not check_balance(probe)[0]:
        # Balance only sees |amplitude|^2, so one failure rules out every sign choice.
        return []
    s0 = _sign_table(len(probe.support0))
    s1 = _sign_table(len(probe.support1))
    pairs = np.array(list(itertools.product(range(len(s0)), range(len(s1)))))
    ops = _error_stack()
    found = set()
    for start in range(0, len(pairs), chunk):
        idx = pairs[start : start + chunk]
        amps = np.zeros((len(idx), DIM, 2))
        amps[:, list(probe.support0), 0] = s0[idx[:, 0]] / np.sqrt(len(probe.support0))
        amps[:, list(probe.support1), 1] = s1[idx[:, 1]] / np.sqrt(len(probe.support1))
        for i, j in idx[_batch_verdicts(amps, ops, tol)]:
            cand = CodeCandidate(
                probe.support0,
                probe.support1,
                tuple(int(x) for x in s0[i]),
                tuple(int(x) for x in s1[j]),
            )
            found.add(cand.canonical())
    return sorted(found, key=CodeCandidate.sign_key)


def search_to_json(results: Sequence[CodeCandidate]) -> str:
    return json.dumps({"count": len(results), "candidates": [c.to_dict() for c in results]}, indent=2)


class BoundRow(NamedTuple):
    n: int
    subspaces_needed: int
    dimension: int
    feasible: bool
    saturates: bool

    def render(self) -> str:
        if not self.feasible:
            verdict = "infeasible"
        elif self.saturates:
            verdict = "feasible(saturates)"
        else:
            verdict = "feasible"
        return f"n={self.n} {self.subspaces_needed} {self.dimension} {verdict}"


def min_code_length(max_n: int) -> list[BoundRow]:
    """Room check ``2(3n+1) <= 2^n`` for ``n = 1..max_n``."""
    if max_n < 1:
        raise ValueError("max_n must be at least 1")
    rows = []
    for n in range(1, max_n + 1):
        need = 2 * (3 * n + 1)
        rows.append(BoundRow(n, need, 2**n, need <= 2**n, need == 2**n))
    return rows


def smallest_feasible(rows: Sequence[BoundRow]) -> BoundRow | None:
    return next((r for r in rows if r.feasible), None)

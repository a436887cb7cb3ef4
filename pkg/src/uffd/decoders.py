"""COMP, DD, the two-step UFFD decoder and the brute-force oracle."""
from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from math import comb

import numpy as np

from .bitmatrix import BitVector, CodeMatrix, DimensionError, covered_columns, outcome, subsets_up_to

OK, AMBIGUOUS, INCONSISTENT = "ok", "ambiguous", "inconsistent"
ALGORITHMS = ("comp", "dd", "uffd", "brute")

DEFAULT_MAX_CANDIDATES = 10**7


class BudgetExceeded(RuntimeError):
    pass


@dataclass
class DecodeResult:
    status: str
    defectives: tuple[int, ...] | None = None
    candidates_examined: int = 0
    step1_size: int = 0
    witness: tuple[tuple[int, ...], tuple[int, ...]] | None = None

    @property
    def ok(self) -> bool:
        return self.status == OK


def _check_outcome(C: CodeMatrix, r: BitVector) -> None:
    if r.length != C.t:
        raise DimensionError(f"outcome length {r.length} != t = {C.t}")


def decode_comp(C: CodeMatrix, r: BitVector) -> tuple[int, ...]:
    """Every column covered by the outcome. Never misses a defective."""
    return tuple(covered_columns(C, r))


def decode_dd(C: CodeMatrix, r: BitVector, d: int | None = None) -> tuple[int, ...]:
    """Definitely-defective rule.

    Among the COMP candidates, keep ``i`` if some positive test contains ``i``
    and no other candidate.  ``d`` is accepted for a uniform decoder signature;
    the rule does not use it.
    """
    cand = covered_columns(C, r)
    cols = [C.columns[i - 1] for i in cand]
    m = len(cols)
    # OR of all candidates except k, via prefix/suffix ORs
    prefix = [0] * (m + 1)
    suffix = [0] * (m + 1)
    for k in range(m):
        prefix[k + 1] = prefix[k] | cols[k]
        suffix[m - k - 1] = suffix[m - k] | cols[m - k - 1]
    return tuple(
        cand[k] for k in range(m) if cols[k] & r.bits & ~(prefix[k] | suffix[k + 1])
    )


def decode_uffd(C: CodeMatrix, r: BitVector, d: int) -> DecodeResult:
    """Two-step decoder for d-UFFD codes.

    Step 1 keeps the columns covered by ``r``.  Step 2 tries their subsets of
    size ``0..d`` (by size, then lexicographically) and returns the first whose
    Boolean sum is exactly ``r``.  The matrix is not verified here.
    """
    _check_outcome(C, r)
    cand = covered_columns(C, r)
    examined = 0
    cols = C.columns
    for D in subsets_up_to(cand, d):
        examined += 1
        acc = 0
        for i in D:
            acc |= cols[i - 1]
        if acc == r.bits:
            return DecodeResult(OK, D, examined, len(cand))
    return DecodeResult(INCONSISTENT, None, examined, len(cand))


def decode_bruteforce(
    C: CodeMatrix, r: BitVector, d: int, max_candidates: int = DEFAULT_MAX_CANDIDATES
) -> DecodeResult:
    """Try every ``D ⊆ [n]`` with ``|D| <= d``; report unique, ambiguous or no match."""
    _check_outcome(C, r)
    total = sum(comb(C.n, k) for k in range(min(d, C.n) + 1))
    if total > max_candidates:
        raise BudgetExceeded(f"{total} candidate sets exceed the budget of {max_candidates}")
    matches = []
    cols = C.columns
    for D in subsets_up_to(range(1, C.n + 1), d):
        acc = 0
        for i in D:
            acc |= cols[i - 1]
        if acc == r.bits:
            matches.append(D)
    if not matches:
        return DecodeResult(INCONSISTENT, None, total, C.n)
    if len(matches) > 1:
        return DecodeResult(AMBIGUOUS, None, total, C.n, (matches[0], matches[1]))
    return DecodeResult(OK, matches[0], total, C.n)


def decode(C: CodeMatrix, r: BitVector, d: int, algo: str) -> DecodeResult:
    """Run any decoder and wrap its answer as a :class:`DecodeResult`."""
    if algo == "uffd":
        return decode_uffd(C, r, d)
    if algo == "brute":
        return decode_bruteforce(C, r, d)
    if algo == "comp":
        found = decode_comp(C, r)
    elif algo == "dd":
        found = decode_dd(C, r, d)
    else:
        raise ValueError(f"unknown decoder {algo!r}")
    return DecodeResult(OK, found, 0, len(covered_columns(C, r)))


@dataclass
class Trial:
    defectives: tuple[int, ...]
    outcome: str
    status: str
    recovered: tuple[int, ...] | None
    success: bool
    candidates_examined: int
    step1_size: int
    seconds: float = field(default=0.0, compare=False)

    def line(self, index: int) -> str:
        rec = "-" if self.recovered is None else ",".join(map(str, self.recovered))
        return (
            f"trial={index} D={','.join(map(str, self.defectives)) or '-'} r={self.outcome} "
            f"status={self.status} recovered={rec or '-'} success={int(self.success)} "
            f"step1_size={self.step1_size} candidates={self.candidates_examined}"
        )


def simulate(C: CodeMatrix, D, algo: str, d: int) -> Trial:
    """Generate the outcome of ``D``, decode it, and record whether ``D`` came back."""
    D = tuple(sorted(set(D)))
    r = outcome(C, D)
    start = time.perf_counter()
    res = decode(C, r, d, algo)
    elapsed = time.perf_counter() - start
    return Trial(
        D, str(r), res.status, res.defectives, res.ok and res.defectives == D,
        res.candidates_examined, res.step1_size, elapsed,
    )


def random_defectives(n: int, d: int, seed: int, index: int) -> tuple[int, ...]:
    """The ``index``-th trial's defective set: a uniform ``min(d, n)``-subset.

    Each trial gets its own stream keyed by ``(seed, index)`` so the draw does
    not depend on how trials are split across workers.
    """
    rng = np.random.default_rng([seed, index])
    picked = rng.choice(n, size=min(d, n), replace=False)
    return tuple(sorted(int(i) + 1 for i in picked))


def simulate_batch(
    C: CodeMatrix, d: int, algo: str, trials: int, seed: int, threads: int = 1
) -> list[Trial]:
    def one(k: int) -> Trial:
        return simulate(C, random_defectives(C.n, d, seed, k), algo, d)

    if threads <= 1:
        return [one(k) for k in range(trials)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(one, range(trials)))


def exhaustive_trials(C: CodeMatrix, d: int, algo: str) -> list[Trial]:
    """One trial for every defective set of size at most ``d``."""
    return [
        simulate(C, D, algo, d)
        for k in range(min(d, C.n) + 1)
        for D in combinations(range(1, C.n + 1), k)
    ]

"""Random constant-weight construction of 2-UFFD codes with expurgation.

Pipeline: sample ``n`` columns uniformly from the weight-``floor(p t)``
vectors, find every bad pair (two distinct 2-sets with equal Boolean sums),
delete one column per bad pair, reject the matrix if some achievable outcome
covers too many columns, and finally verify the result exhaustively.
"""
from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

import numpy as np

from .bitmatrix import CodeMatrix, covered_columns, format_set, outcome, subsets_up_to
from .properties import is_uffd

THRESHOLD_RULES = ("sqrt-half-n", "sqrt-n")
MAX_RETRIES = 16
DEFAULT_MAX_SETS = 5 * 10**6


class RetriesExhausted(RuntimeError):
    pass


class CoverageRejected(Exception):
    def __init__(self, threshold: int, violations: list[tuple[tuple[int, ...], int]]):
        self.threshold = threshold
        self.violations = violations
        first = ", ".join(f"{format_set(D)}:{c}" for D, c in violations[:3])
        super().__init__(f"{len(violations)} outcome(s) cover more than {threshold} columns ({first})")


@dataclass(frozen=True)
class EnsembleParams:
    t: int
    p: float
    n: int
    seed: int = 0

    def __post_init__(self):
        if self.t < 1:
            raise ValueError(f"t must be >= 1, got {self.t}")
        if not 0 < self.p < 1:
            raise ValueError(f"p must lie in (0, 1), got {self.p}")
        if self.n < 2:
            raise ValueError(f"n must be >= 2, got {self.n}")
        if not 0 <= self.seed < 1 << 64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        if self.w < 1:
            raise ValueError(f"floor(p*t) = {self.w}; need a positive column weight")

    @property
    def w(self) -> int:
        # decimal reading of p so that e.g. 0.29 * 100 floors to 29, not 28
        return math.floor(Fraction(repr(self.p)) * self.t)


def sample_supports(rng: np.random.Generator, t: int, w: int, count: int) -> np.ndarray:
    """``count x w`` array of row indices, each row a uniform ``w``-subset of ``range(t)``."""
    keys = rng.random((count, t))
    return np.argsort(keys, axis=1, kind="stable")[:, :w]


def sample_constant_weight(params: EnsembleParams) -> CodeMatrix:
    rng = np.random.default_rng(params.seed)
    supports = sample_supports(rng, params.t, params.w, params.n)
    cols = tuple(sum(1 << int(j) for j in row) for row in supports)
    return CodeMatrix(params.t, cols)


def derived_seed(seed: int, attempt: int) -> int:
    """Seed for retry ``attempt``; attempt 0 uses ``seed`` itself."""
    if attempt == 0:
        return seed
    state = np.random.SeedSequence([seed, attempt]).generate_state(2, np.uint32)
    return int(state[0]) | int(state[1]) << 32


# -- bad pairs -----------------------------------------------------------------


@dataclass
class BadPairReport:
    pairs: list[tuple[tuple[int, int], tuple[int, int]]]
    count_disjoint: int
    count_overlap: int

    @property
    def count(self) -> int:
        return len(self.pairs)


def find_bad_pairs(C: CodeMatrix, max_sets: int = DEFAULT_MAX_SETS) -> BadPairReport:
    """All unordered pairs of distinct 2-sets with equal Boolean sums.

    2-sets are bucketed by their union; only sets sharing a bucket collide.
    """
    n = C.n
    if n * (n - 1) // 2 > max_sets:
        raise RuntimeError(f"{n * (n - 1) // 2} 2-sets exceed the budget of {max_sets}")
    buckets: dict[int, list[tuple[int, int]]] = defaultdict(list)
    cols = C.columns
    for i, j in combinations(range(1, n + 1), 2):
        buckets[cols[i - 1] | cols[j - 1]].append((i, j))
    pairs = []
    disjoint = overlap = 0
    for group in buckets.values():
        for a, b in combinations(group, 2):
            pairs.append((a, b))
            if set(a) & set(b):
                overlap += 1
            else:
                disjoint += 1
    pairs.sort()
    return BadPairReport(pairs, disjoint, overlap)


def expurgation_plan(C: CodeMatrix, report: BadPairReport) -> list[int]:
    """Columns to delete so that no bad pair survives, in deletion order.

    Each round walks the remaining pairs in order and, for any pair not already
    broken this round, deletes its highest-index non-shared column.  Deleting
    columns never creates collisions, so the next round only sees survivors
    of the original report.
    """
    deleted: list[int] = []
    gone: set[int] = set()
    pairs = report.pairs
    while pairs:
        for D1, D2 in pairs:
            if gone.intersection(D1) or gone.intersection(D2):
                continue
            victim = max(set(D1) ^ set(D2))
            gone.add(victim)
            deleted.append(victim)
        pairs = [(a, b) for a, b in pairs if not gone.intersection(a + b)]
    return deleted


def expurgate(C: CodeMatrix, report: BadPairReport) -> CodeMatrix:
    plan = expurgation_plan(C, report)
    return C.delete_columns(plan) if plan else C


# -- coverage ------------------------------------------------------------------


def coverage_threshold(n: int, rule: str = "sqrt-half-n") -> int:
    """``floor(sqrt(n/2))`` or ``floor(sqrt(n))``, computed in integers."""
    if rule == "sqrt-half-n":
        return math.isqrt(n // 2)
    if rule == "sqrt-n":
        return math.isqrt(n)
    raise ValueError(f"unknown threshold rule {rule!r}")


def coverage_filter(
    C: CodeMatrix, threshold: int | None = None, rule: str = "sqrt-half-n", d: int = 2
) -> CodeMatrix:
    """Return ``C`` if every outcome of at most ``d`` columns covers ``<= threshold`` columns.

    Only achievable outcomes are checked.  Without an explicit ``threshold``
    it is derived from ``C.n`` by ``rule``.  Raises :class:`CoverageRejected`.
    """
    if threshold is None:
        threshold = coverage_threshold(C.n, rule)
    violations = []
    for D in subsets_up_to(range(1, C.n + 1), d):
        count = len(covered_columns(C, outcome(C, D)))
        if count > threshold:
            violations.append((D, count))
    if violations:
        raise CoverageRejected(threshold, violations)
    return C


def max_covered(C: CodeMatrix, d: int = 2) -> int:
    return max(len(covered_columns(C, outcome(C, D))) for D in subsets_up_to(range(1, C.n + 1), d))


# -- full pipeline -------------------------------------------------------------


@dataclass
class BuildReport:
    t: int
    p: float
    w: int
    n_target: int
    seed: int
    seed_used: int = 0
    attempts: int = 0
    bad_pairs: int = 0
    bad_disjoint: int = 0
    bad_overlap: int = 0
    columns_removed: int = 0
    n_final: int = 0
    threshold_rule: str = "sqrt-half-n"
    threshold: int = 0
    max_covered: int = 0
    verified: bool = False
    rejections: list[str] = field(default_factory=list)

    @property
    def rate(self) -> float:
        return math.log2(self.n_final) / self.t if self.n_final else 0.0

    def to_text(self) -> str:
        rows = [
            ("t", self.t), ("p", self.p), ("w", self.w), ("n_target", self.n_target),
            ("seed", self.seed), ("seed_used", self.seed_used), ("attempts", self.attempts),
            ("bad_pairs", self.bad_pairs), ("bad_pairs_disjoint", self.bad_disjoint),
            ("bad_pairs_overlap", self.bad_overlap), ("columns_removed", self.columns_removed),
            ("n_final", self.n_final), ("threshold_rule", self.threshold_rule),
            ("threshold", self.threshold), ("max_covered", self.max_covered),
            ("verified_uffd2", int(self.verified)), ("rate", f"{self.rate:.6f}"),
        ]
        return "".join(f"{k}={v}\n" for k, v in rows)


def build_uffd2(
    params: EnsembleParams,
    threshold_rule: str = "sqrt-half-n",
    max_retries: int = MAX_RETRIES,
) -> tuple[CodeMatrix, BuildReport]:
    """Sample, expurgate, filter and verify until a 2-UFFD code comes out.

    The coverage threshold is taken from the ensemble size ``params.n``: with
    the sqrt-half-n rule this is ``sqrt(n/2)``, the square root of the ``n/2``
    columns the expurgation argument guarantees to keep.  Attempt ``k`` uses
    ``derived_seed(params.seed, k)``.  Raises :class:`RetriesExhausted` after
    ``max_retries`` rejected attempts.
    """
    report = BuildReport(params.t, params.p, params.w, params.n, params.seed, threshold_rule=threshold_rule)
    report.threshold = coverage_threshold(params.n, threshold_rule)
    for attempt in range(max_retries + 1):
        seed = derived_seed(params.seed, attempt)
        report.attempts = attempt + 1
        report.seed_used = seed
        C = sample_constant_weight(EnsembleParams(params.t, params.p, params.n, seed))
        bad = find_bad_pairs(C)
        report.bad_pairs, report.bad_disjoint, report.bad_overlap = (
            bad.count, bad.count_disjoint, bad.count_overlap,
        )
        plan = expurgation_plan(C, bad)
        report.columns_removed = len(plan)
        C = C.delete_columns(plan) if plan else C
        report.n_final = C.n
        report.max_covered = max_covered(C)
        try:
            coverage_filter(C, report.threshold)
        except CoverageRejected as exc:
            report.rejections.append(f"attempt {attempt}: {exc}")
            continue
        check = is_uffd(C, 2)
        if not check.holds:
            report.rejections.append(f"attempt {attempt}: {check.describe()}")
            continue
        report.verified = True
        return C, report
    raise RetriesExhausted(
        f"no verified 2-UFFD code after {max_retries + 1} attempts; last: {report.rejections[-1]}"
    )


# -- ensemble statistics -------------------------------------------------------


def empirical_collision_rates(t: int, w: int, samples: int, seed: int) -> tuple[float, float]:
    """Monte Carlo frequencies of ``c1|c2 == c3|c4`` and ``c1|c2 == c1|c3``.

    Each sample draws four fresh weight-``w`` columns; the overlap event reuses
    the first three.  Requires ``t <= 62`` (columns are packed into int64).
    """
    if t > 62:
        raise ValueError("t must be <= 62 for the vectorized sampler")
    rng = np.random.default_rng(seed)
    supports = sample_supports(rng, t, w, 4 * samples).reshape(samples, 4, w)
    packed = (np.int64(1) << supports.astype(np.int64)).sum(axis=2)
    c1, c2, c3, c4 = packed.T
    disjoint = np.mean((c1 | c2) == (c3 | c4))
    overlap = np.mean((c1 | c2) == (c1 | c3))
    return float(disjoint), float(overlap)

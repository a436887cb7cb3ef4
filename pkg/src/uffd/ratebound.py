"""Collision probabilities of the constant-weight ensemble and the d=2 rate bound.

The achievable rate for 2-UFFD codes is ``max_p min(R0(p), R1(p))`` where
``R0`` and ``R1`` are inner minima over ``alpha`` in ``A = (p, min(2p, 1))``
of two entropy expressions, coming from bad pairs with disjoint and with
overlapping index sets respectively.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, log2
from typing import Callable

INV_PHI = (math.sqrt(5) - 1) / 2
EDGE_EPS = 1e-9


def entropy(x: float) -> float:
    """Binary entropy in bits, with h(0) = h(1) = 0."""
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"entropy argument {x} outside [0, 1]")
    if x == 0.0 or x == 1.0:
        return 0.0
    return -x * log2(x) - (1 - x) * log2(1 - x)


def _h(x: float) -> float:
    # absorb float round-off at the ends of [0, 1]
    if -1e-12 < x < 0.0:
        x = 0.0
    elif 1.0 < x < 1.0 + 1e-12:
        x = 1.0
    return entropy(x)


# -- exact collision probabilities ---------------------------------------------


@dataclass(frozen=True)
class CollisionProbabilities:
    t: int
    w: int
    P0: Fraction
    P1: Fraction


def collision_probs(t: int, w: int) -> CollisionProbabilities:
    """Exact probabilities that two pairs of weight-``w`` columns have equal unions.

    ``P0``: pairs with disjoint index sets, ``c1 | c2 == c3 | c4``.
    ``P1``: pairs sharing one index, ``c1 | c2 == c1 | c3``.
    The sums run over the weight ``k`` of the common union.
    """
    if not 1 <= w <= t:
        raise ValueError(f"need 1 <= w <= t, got t={t}, w={w}")
    total = comb(t, w)
    ks = range(w, min(2 * w, t) + 1)
    num0 = sum(comb(t, k) * comb(k, w) ** 2 * comb(w, k - w) ** 2 for k in ks)
    num1 = sum(comb(t - w, k - w) * comb(w, k - w) ** 2 for k in ks)
    return CollisionProbabilities(t, w, Fraction(num0, total**4), Fraction(num1, total**2))


def expected_bad_pairs(t: int, w: int, n: int) -> tuple[float, float]:
    """Exact expected numbers of disjoint and overlapping bad pairs among ``n`` columns.

    There are ``3*C(n,4)`` unordered pairs of disjoint 2-sets and
    ``3*C(n,3)`` pairs sharing one index.
    """
    cp = collision_probs(t, w)
    return float(3 * comb(n, 4) * cp.P0), float(3 * comb(n, 3) * cp.P1)


def bad_pair_bounds(t: int, w: int, n: int) -> tuple[float, float]:
    """The looser ``n^4 * P0`` and ``n^3 * P1`` estimates."""
    cp = collision_probs(t, w)
    return float(n**4 * cp.P0), float(n**3 * cp.P1)


def advise_n(t: int, w: int, n_max: int = 1 << 20) -> int:
    """Largest ``n`` with ``n^4 P0 < n/8`` and ``n^3 P1 < n/8`` (0 if none).

    Under these two conditions the expected number of bad pairs is below
    ``n/4``, so by Markov at most ``n/2`` are bad with probability over 1/2.
    """
    cp = collision_probs(t, w)

    def ok(n: int) -> bool:
        return 8 * n**3 * cp.P0 < 1 and 8 * n**2 * cp.P1 < 1

    if not ok(2):
        return 0
    lo, hi = 2, 2
    while hi < n_max and ok(hi):
        lo, hi = hi, min(2 * hi, n_max)
    if ok(hi):
        return hi
    while hi - lo > 1:
        mid = (lo + hi) // 2
        lo, hi = (mid, hi) if ok(mid) else (lo, mid)
    return lo


# -- the entropy expressions ---------------------------------------------------


def _alpha_interval(p: float) -> tuple[float, float]:
    if not 0.0 < p < 1.0:
        raise ValueError(f"p = {p} outside (0, 1)")
    return p, min(2 * p, 1.0)


def _check_alpha(p: float, alpha: float) -> None:
    lo, hi = _alpha_interval(p)
    if not lo < alpha < hi:
        raise ValueError(f"alpha = {alpha} outside A = ({lo}, {hi})")


def r0(p: float, alpha: float) -> float:
    """Rate allowed by disjoint bad pairs at weight fraction ``p`` and union fraction ``alpha``."""
    _check_alpha(p, alpha)
    return (
        4 * _h(p) - 2 * alpha * _h(p / alpha) - 2 * p * _h((alpha - p) / p) - _h(alpha)
    ) / 3


def r1(p: float, alpha: float) -> float:
    """Rate allowed by overlapping bad pairs."""
    _check_alpha(p, alpha)
    return (2 * _h(p) - 2 * p * _h((alpha - p) / p) - (1 - p) * _h((alpha - p) / (1 - p))) / 2


def golden_section(
    f: Callable[[float], float], lo: float, hi: float, tol: float = 1e-7, maximize: bool = False
) -> tuple[float, float]:
    """Extremum of a unimodal ``f`` on ``[lo, hi]``, located to ``tol`` in the argument."""
    sign = -1.0 if maximize else 1.0
    a, b = lo, hi
    c = b - INV_PHI * (b - a)
    e = a + INV_PHI * (b - a)
    fc, fe = sign * f(c), sign * f(e)
    while b - a > tol:
        if fc <= fe:
            b, e, fe = e, c, fc
            c = b - INV_PHI * (b - a)
            fc = sign * f(c)
        else:
            a, c, fc = c, e, fe
            e = a + INV_PHI * (b - a)
            fe = sign * f(e)
    x = (a + b) / 2
    # never return something worse than an evaluated endpoint of the bracket
    best = min((sign * f(x), x), (fc, c), (fe, e))
    return best[1], sign * best[0]


def _bracketed(
    f: Callable[[float], float], lo: float, hi: float, points: int, tol: float, maximize: bool
) -> tuple[float, float]:
    """Grid search for the best cell, then golden section inside its neighbours."""
    xs = [lo + (hi - lo) * i / (points - 1) for i in range(points)]
    vals = [f(x) for x in xs]
    pick = max if maximize else min
    k = vals.index(pick(vals))
    a, b = xs[max(k - 1, 0)], xs[min(k + 1, points - 1)]
    return golden_section(f, a, b, tol, maximize)


def inner_min(
    rate: Callable[[float, float], float], p: float, points: int = 64, tol: float = 1e-7
) -> tuple[float, float]:
    """``(alpha*, value)`` minimizing ``rate(p, .)`` over A, clamped ``EDGE_EPS`` inside."""
    lo, hi = _alpha_interval(p)
    return _bracketed(lambda a: rate(p, a), lo + EDGE_EPS, hi - EDGE_EPS, points, tol, False)


@dataclass
class RateBoundResult:
    p_star: float
    rate: float
    alpha_star_r0: float
    alpha_star_r1: float
    r0_star: float
    r1_star: float
    trace: list[tuple[float, float, float]] = field(default_factory=list, repr=False)

    @property
    def binding(self) -> str:
        return "R0" if self.r0_star <= self.r1_star else "R1"


def rate_at(p: float, alpha_points: int = 64, tol: float = 1e-7) -> float:
    """``min(R0(p), R1(p))``."""
    return min(inner_min(r0, p, alpha_points, tol)[1], inner_min(r1, p, alpha_points, tol)[1])


def optimize_rate(
    p_points: int = 200, alpha_points: int = 64, tol: float = 1e-7
) -> RateBoundResult:
    """Maximize ``min(R0(p), R1(p))`` over ``p`` in (0, 1).

    A grid of ``p_points`` interior points brackets the maximum, which golden
    section then refines; the inner minima over alpha are refined the same way.
    """
    ps = [i / (p_points + 1) for i in range(1, p_points + 1)]
    trace = []
    for p in ps:
        trace.append((p, inner_min(r0, p, alpha_points, tol)[1], inner_min(r1, p, alpha_points, tol)[1]))
    k = max(range(len(ps)), key=lambda i: min(trace[i][1], trace[i][2]))
    lo = ps[k - 1] if k > 0 else ps[0] / 2
    hi = ps[k + 1] if k + 1 < len(ps) else (1 + ps[-1]) / 2
    p_star, rate = golden_section(
        lambda p: rate_at(p, alpha_points, tol), lo, hi, tol, maximize=True
    )
    a0, v0 = inner_min(r0, p_star, alpha_points, tol)
    a1, v1 = inner_min(r1, p_star, alpha_points, tol)
    return RateBoundResult(p_star, min(v0, v1), a0, a1, v0, v1, trace)


# -- coverage probability ------------------------------------------------------


@dataclass(frozen=True)
class CoverageQ:
    t: int
    w: int
    q: Fraction
    exponent: float  # 2p - h(p) at p = w/t

    @property
    def log2_q_per_t(self) -> float:
        return (math.log2(self.q.numerator) - math.log2(self.q.denominator)) / self.t


def coverage_q(t: int, w: int) -> CoverageQ:
    """Probability that a random weight-``w`` column lies inside a fixed weight-``2w`` outcome."""
    if w < 1 or 2 * w > t:
        raise ValueError(f"need 1 <= w and 2w <= t, got t={t}, w={w}")
    p = w / t
    return CoverageQ(t, w, Fraction(comb(2 * w, w), comb(t, w)), 2 * p - entropy(p))


# -- reference values ----------------------------------------------------------


@dataclass(frozen=True)
class KnownBounds:
    d: int
    union_free: tuple[float, float] | None = None
    disjunctive: tuple[float, float] | None = None
    ssm: tuple[float, float] | None = None
    uffd: tuple[float, float] | None = None
    asymptotic: tuple[float, float] | None = None
    asymptotic_only: bool = False

    @property
    def uffd_lower(self) -> float | None:
        return None if self.uffd is None else self.uffd[0]

    @property
    def ssm_lower(self) -> float | None:
        return None if self.ssm is None else self.ssm[0]


UFFD2_LOWER = 0.3017


def known_bounds(d: int) -> KnownBounds:
    """Published lower/upper rate bounds; for ``d != 2`` only the large-``d`` asymptotics."""
    if d < 2:
        raise ValueError(f"d must be >= 2, got {d}")
    asym = (math.log(2) / d**2, 2 * math.log2(d) / d**2)
    if d == 2:
        return KnownBounds(
            d,
            union_free=(0.3135, 0.4998),
            disjunctive=(0.1814, 0.3219),
            ssm=(0.2213, 0.4998),
            uffd=(UFFD2_LOWER, 0.4998),
            asymptotic=asym,
        )
    return KnownBounds(d, asymptotic=asym, asymptotic_only=True)

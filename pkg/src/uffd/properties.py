"""Exhaustive verifiers for union-free, disjunctive, SSM and UFFD codes.

Every verifier enumerates index sets in a fixed order (by size, then
lexicographically), so the reported witness is the first violation in that
order and does not depend on how the work is scheduled.  All of them are
exponential in ``d`` and meant for small instances.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Any

from .bitmatrix import CodeMatrix, covered_columns, format_set, outcome, subsets_up_to

PROPERTIES = ("union_free", "disjunctive", "ssm", "uffd")

DEFAULT_MAX_SUBSETS = 1 << 24


class ResourceLimitError(RuntimeError):
    """An enumeration would exceed its configured budget."""


class HierarchyViolation(AssertionError):
    """Two verifiers disagree with an implication that must hold."""


@dataclass
class PropertyReport:
    property: str
    d: int
    holds: bool
    witness: dict[str, Any] | None = None
    vacuous: bool = False

    def __bool__(self) -> bool:
        return self.holds

    def describe(self) -> str:
        """One line in indexed-set notation, e.g. ``D_1={1,2} D_2={3}``."""
        status = "holds" if self.holds else "fails"
        line = f"{self.property}(d={self.d}): {status}"
        if self.vacuous:
            line += " (vacuous: no index set of the required size has an outside column)"
        if self.witness:
            line += " " + format_witness(self.witness)
        return line


def format_witness(w: dict[str, Any]) -> str:
    parts = []
    for key, value in w.items():
        if isinstance(value, tuple):
            parts.append(f"{key}={format_set(value)}")
        else:
            parts.append(f"{key}={value}")
    return " ".join(parts)


def _check_d(d: int, minimum: int = 1) -> None:
    if d < minimum:
        raise ValueError(f"d must be >= {minimum}, got {d}")


def is_union_free(C: CodeMatrix, d: int) -> PropertyReport:
    """All Boolean sums of at most ``d`` columns (empty set included) are distinct."""
    _check_d(d)
    seen: dict[int, tuple[int, ...]] = {}
    cols = C.columns
    for D in subsets_up_to(range(1, C.n + 1), d):
        r = 0
        for i in D:
            r |= cols[i - 1]
        other = seen.get(r)
        if other is not None:
            return PropertyReport("union_free", d, False, {"D_1": other, "D_2": D})
        seen[r] = D
    return PropertyReport("union_free", d, True)


def is_disjunctive(C: CodeMatrix, d: int, at_most: bool = False) -> PropertyReport:
    """No union of ``d`` columns covers a column outside the union.

    ``at_most=True`` checks every ``|D| <= d`` (including the empty set, which
    rules out all-zero columns) instead of exactly ``|D| = d``.  With
    ``d >= n`` there is no outside column and the report is marked vacuous.
    """
    _check_d(d, minimum=0 if at_most else 1)
    n = C.n
    if d >= n and not at_most:
        return PropertyReport("disjunctive", d, True, vacuous=True)
    cols = C.columns
    sizes = range(min(d, n - 1) + 1) if at_most else (d,)
    for k in sizes:
        for D in combinations(range(1, n + 1), k):
            r = 0
            for i in D:
                r |= cols[i - 1]
            inside = set(D)
            for j in range(1, n + 1):
                if j not in inside and cols[j - 1] & ~r == 0:
                    return PropertyReport("disjunctive", d, False, {"D": D, "j": j})
    return PropertyReport("disjunctive", d, True)


def ssm_intersection(
    C: CodeMatrix,
    D0: tuple[int, ...],
    method: str = "closure",
    max_subsets: int = DEFAULT_MAX_SUBSETS,
) -> tuple[int, ...]:
    """Intersection of all ``D' ⊆ [n]`` whose outcome equals ``outcome(C, D0)``.

    Every such ``D'`` lies inside the covered set ``S`` of the outcome.
    ``method="enumerate"`` walks all subsets of ``S``.  ``method="closure"``
    uses the equivalent test: ``i`` is in every ``D'`` iff the union of
    ``S \\ {i}`` falls short of the outcome (OR is monotone, so ``S \\ {i}`` is
    the largest candidate avoiding ``i``).
    """
    r = outcome(C, D0).bits
    S = covered_columns(C, outcome(C, D0))
    cols = [C.columns[i - 1] for i in S]
    if method == "closure":
        m = len(cols)
        prefix = [0] * (m + 1)
        suffix = [0] * (m + 1)
        for k in range(m):
            prefix[k + 1] = prefix[k] | cols[k]
            suffix[m - k - 1] = suffix[m - k] | cols[m - k - 1]
        return tuple(S[k] for k in range(m) if prefix[k] | suffix[k + 1] != r)
    if method == "enumerate":
        m = len(cols)
        if 1 << m > max_subsets:
            raise ResourceLimitError(
                f"covered set of size {m} needs 2^{m} subsets (limit {max_subsets})"
            )
        # ors[mask] built from mask without its lowest bit
        ors = [0] * (1 << m)
        meet = (1 << m) - 1
        for mask in range(1, 1 << m):
            low = mask & -mask
            ors[mask] = ors[mask ^ low] | cols[low.bit_length() - 1]
            if ors[mask] == r:
                meet &= mask
        if r == 0:
            meet = 0
        return tuple(S[k] for k in range(m) if meet >> k & 1)
    raise ValueError(f"unknown method {method!r}")


def is_ssm(
    C: CodeMatrix,
    d: int,
    method: str = "closure",
    max_subsets: int = DEFAULT_MAX_SUBSETS,
) -> PropertyReport:
    """Every ``d``-set ``D_0`` equals the intersection of its consistent sets ``U(D_0)``."""
    _check_d(d)
    if d > C.n:
        return PropertyReport("ssm", d, True, vacuous=True)
    for D0 in combinations(range(1, C.n + 1), d):
        meet = ssm_intersection(C, D0, method, max_subsets)
        if meet != D0:
            return PropertyReport("ssm", d, False, {"D_0": D0, "intersection": meet})
    return PropertyReport("ssm", d, True)


def is_uffd(C: CodeMatrix, d: int) -> PropertyReport:
    """Union-free, and every achievable outcome covers at most ``n^(1/d)`` columns.

    The threshold is compared exactly as ``count**d <= n``.
    """
    _check_d(d)
    uf = is_union_free(C, d)
    if not uf.holds:
        return PropertyReport("uffd", d, False, {"reason": "not_union_free", **uf.witness})
    witness = coverage_violation(C, d)
    if witness is not None:
        return PropertyReport("uffd", d, False, witness)
    return PropertyReport("uffd", d, True)


def coverage_violation(C: CodeMatrix, d: int) -> dict[str, Any] | None:
    """First ``D`` (``|D| <= d``) whose outcome covers more than ``n^(1/d)`` columns."""
    n = C.n
    for D in subsets_up_to(range(1, n + 1), d):
        r = outcome(C, D)
        covered = covered_columns(C, r)
        if len(covered) ** d > n:
            return {"D": D, "r": str(r), "covered": tuple(covered)}
    return None


# (premise, conclusion, shift of d in the conclusion)
IMPLICATIONS = (
    ("disjunctive", "ssm", 0),
    ("ssm", "union_free", 0),
    ("disjunctive", "union_free", 0),
    ("disjunctive", "uffd", 0),
    ("uffd", "union_free", 0),
    ("union_free", "disjunctive", -1),
)


@dataclass
class HierarchyReport:
    d: int
    n: int
    table: dict[str, PropertyReport]
    lower_disjunctive: PropertyReport | None
    checked: list[str] = field(default_factory=list)
    skipped: dict[str, str] = field(default_factory=dict)
    violations: list[str] = field(default_factory=list)

    def lines(self) -> list[str]:
        return [self.table[p].describe() for p in PROPERTIES]


def _implication_precondition(premise: str, conclusion: str, d: int, n: int) -> str | None:
    """Reason an implication does not apply to this ``(d, n)``, or ``None``."""
    if premise in ("disjunctive", "ssm") and n <= d:
        return f"{premise}({d}) is vacuous or degenerate for n={n} <= d"
    if premise == "union_free" and d < 2:
        return "needs d >= 2"
    if (premise, conclusion) == ("disjunctive", "uffd") and d**d > n:
        # outcomes of a d-disjunctive code cover exactly |D| columns; |D| = d
        # meets the n^(1/d) threshold only when d^d <= n
        return f"needs d^d <= n, got {d}^{d} > {n}"
    return None


def check_hierarchy(
    C: CodeMatrix, d: int, strict: bool = True, ssm_method: str = "closure"
) -> HierarchyReport:
    """Evaluate all four properties and every implication between them.

    With ``strict=True`` a violated implication raises
    :class:`HierarchyViolation`, since it means one verifier is wrong.
    """
    _check_d(d)
    table = {
        "union_free": is_union_free(C, d),
        "disjunctive": is_disjunctive(C, d),
        "ssm": is_ssm(C, d, method=ssm_method),
        "uffd": is_uffd(C, d),
    }
    lower = is_disjunctive(C, d - 1) if d >= 2 else None
    report = HierarchyReport(d, C.n, table, lower)
    for premise, conclusion, shift in IMPLICATIONS:
        name = f"{premise}({d}) => {conclusion}({d + shift})"
        reason = _implication_precondition(premise, conclusion, d, C.n)
        if reason is not None:
            report.skipped[name] = reason
            continue
        report.checked.append(name)
        rhs = lower if shift else table[conclusion]
        if table[premise].holds and not rhs.holds:
            report.violations.append(name)
    if strict and report.violations:
        raise HierarchyViolation(
            f"implications violated: {report.violations}\n" + "\n".join(report.lines())
        )
    return report


def replay_witness(C: CodeMatrix, report: PropertyReport) -> bool:
    """Re-check a failing report's witness; True iff it reproduces the violation."""
    w = report.witness
    if report.holds or w is None:
        return False
    if report.property == "union_free" or w.get("reason") == "not_union_free":
        D1, D2 = w["D_1"], w["D_2"]
        return (
            D1 != D2
            and max(len(D1), len(D2)) <= report.d
            and outcome(C, D1) == outcome(C, D2)
        )
    if report.property == "disjunctive":
        D, j = w["D"], w["j"]
        r = outcome(C, D)
        return j not in D and C.columns[j - 1] & ~r.bits == 0
    if report.property == "ssm":
        D0 = w["D_0"]
        return len(D0) == report.d and ssm_intersection(C, D0, "enumerate") != D0
    if report.property == "uffd":
        D = w["D"]
        covered = covered_columns(C, outcome(C, D))
        return len(D) <= report.d and len(covered) ** report.d > C.n
    return False

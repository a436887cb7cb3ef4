import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from conftest import corpus, matrices, random_matrix
from uffd.bitmatrix import CodeMatrix
from uffd.properties import (
    HierarchyViolation,
    ResourceLimitError,
    check_hierarchy,
    is_disjunctive,
    is_ssm,
    is_uffd,
    is_union_free,
    replay_witness,
    ssm_intersection,
)

EQUAL_COLS = CodeMatrix.from_columns(["1100", "0110", "1100", "0011"])


@pytest.mark.parametrize("n", [1, 3, 6])
def test_identity_is_everything(n):
    C = CodeMatrix.identity(n)
    for d in range(1, n + 1):
        assert is_union_free(C, d).holds
        assert is_ssm(C, d).holds
    for d in range(1, n):
        assert is_disjunctive(C, d).holds


def test_equal_columns_collide():
    rep = is_union_free(EQUAL_COLS, 1)
    assert not rep.holds
    assert rep.witness == {"D_1": (1,), "D_2": (3,)}
    assert replay_witness(EQUAL_COLS, rep)


def test_zero_column_breaks_disjunctive():
    C = CodeMatrix.from_columns(["100", "000", "011", "010"])
    for d in (1, 2, 3):
        rep = is_disjunctive(C, d)
        assert not rep.holds and replay_witness(C, rep)
        assert rep.witness["j"] == 2 or 2 in rep.witness["D"]


def test_disjunctive_vacuous_when_d_at_least_n():
    C = CodeMatrix.from_columns(["11", "11"])
    rep = is_disjunctive(C, 2)
    assert rep.holds and rep.vacuous
    assert "vacuous" in rep.describe()


def test_disjunctive_at_most_variant():
    # {1,2} covers nothing outside, but {1} alone covers column 3
    C = CodeMatrix.from_columns(["1100", "0011", "1000", "0110"])
    assert not is_disjunctive(C, 1).holds
    assert not is_disjunctive(C, 2, at_most=True).holds
    assert not is_disjunctive(CodeMatrix.from_columns(["10", "00"]), 0, at_most=True).holds


def test_uffd_identity4():
    assert is_uffd(CodeMatrix.identity(4), 2).holds


def test_uffd_needs_n_at_least_d_to_the_d():
    # I_3 is 2-disjunctive but a 2-set covers 2 columns and 2^2 > 3
    C = CodeMatrix.identity(3)
    assert is_disjunctive(C, 2).holds
    rep = is_uffd(C, 2)
    assert not rep.holds and replay_witness(C, rep)
    assert rep.witness["D"] == (1, 2)


def test_no_two_or_three_column_code_is_2uffd():
    for n in (2, 3):
        for C in corpus(30, seed=n, n_range=(n, n)):
            assert not is_uffd(C, 2).holds


def test_ssm_methods_and_cap():
    C = CodeMatrix.identity(5)
    assert ssm_intersection(C, (1, 2), "enumerate") == (1, 2)
    full = CodeMatrix(3, (0b111,) * 4 + (0b001,))
    assert ssm_intersection(full, (1, 2), "closure") == ()
    with pytest.raises(ResourceLimitError):
        ssm_intersection(full, (1, 2), "enumerate", max_subsets=8)
    with pytest.raises(ValueError):
        ssm_intersection(C, (1,), "magic")


def test_ssm_zero_outcome():
    C = CodeMatrix.from_columns(["000", "000", "100"])
    assert ssm_intersection(C, (1, 2), "enumerate") == ()
    assert ssm_intersection(C, (1, 2), "closure") == ()
    assert not is_ssm(C, 2).holds


def test_known_disjunctive_code_is_ssm_and_uffd():
    # all 2-subsets of 5 rows as columns: weight-2 columns, 10 of them
    from itertools import combinations
    cols = tuple((1 << a) | (1 << b) for a, b in combinations(range(5), 2))
    C = CodeMatrix(5, cols)
    assert not is_disjunctive(C, 2).holds
    # a Steiner-like 2-disjunctive code: columns of weight 3 pairwise meeting in <= 1 row
    fano = ["1101000", "0110100", "0011010", "0001101", "1000110", "0100011", "1010001"]
    F = CodeMatrix.from_columns(fano)
    assert is_disjunctive(F, 2).holds
    assert is_ssm(F, 2).holds
    assert is_uffd(F, 2).holds


@settings(max_examples=300, deadline=None)
@given(matrices(max_t=7, max_n=7), st.integers(1, 3))
def test_verifiers_match_naive_oracles(C, d):
    assert is_union_free(C, d).holds == oracles.union_free(C, d)
    if d < C.n:
        assert is_disjunctive(C, d).holds == oracles.disjunctive(C, d)
    if d <= C.n:
        assert is_ssm(C, d).holds == oracles.ssm(C, d)
        assert is_ssm(C, d, method="enumerate").holds == oracles.ssm(C, d)
    assert is_uffd(C, d).holds == oracles.uffd(C, d)


def test_random_9x6_weight3_against_oracle():
    rng = np.random.default_rng(9)
    for _ in range(60):
        C = random_matrix(rng, 9, 6, weight=3)
        assert is_union_free(C, 2).holds == oracles.union_free(C, 2)


def test_disjunctive_agrees_with_oracle_1000_samples():
    rng = np.random.default_rng(1000)
    for k in range(1000):
        C = random_matrix(rng, int(rng.integers(4, 9)), int(rng.integers(3, 7)), density=0.35)
        d = 1 + k % 2
        assert is_disjunctive(C, d).holds == oracles.disjunctive(C, d)


def test_ssm_restriction_exhaustive_tiny():
    """Every 3x4 matrix: restricted and unrestricted enumeration agree."""
    from itertools import product
    for cols in product(range(8), repeat=4):
        C = CodeMatrix(3, cols)
        assert is_ssm(C, 2, method="enumerate").holds == oracles.ssm(C, 2)
        assert is_ssm(C, 2).holds == is_ssm(C, 2, method="enumerate").holds


def test_ssm_restriction_random_up_to_12():
    rng = np.random.default_rng(12)
    for _ in range(25):
        n = int(rng.integers(8, 13))
        C = random_matrix(rng, 8, n, density=0.3)
        for D0 in [(1, 2), (3, n)]:
            assert ssm_intersection(C, D0, "enumerate") == ssm_intersection(C, D0, "closure")
        assert is_ssm(C, 2).holds == oracles.ssm(C, 2)


@settings(max_examples=200, deadline=None)
@given(matrices(max_t=8, max_n=7), st.integers(1, 3))
def test_failing_reports_replay(C, d):
    reports = [is_union_free(C, d), is_uffd(C, d)]
    if d <= C.n:
        reports.append(is_ssm(C, d))
    if d < C.n:
        reports.append(is_disjunctive(C, d))
    for rep in reports:
        if not rep.holds:
            assert rep.witness is not None
            assert replay_witness(C, rep)


@settings(max_examples=200, deadline=None)
@given(matrices(max_t=8, max_n=7), st.integers(1, 3))
def test_monotone_in_d(C, d):
    if is_union_free(C, d).holds:
        assert all(is_union_free(C, e).holds for e in range(1, d))
    if d < C.n - 1 and is_disjunctive(C, d).holds:
        assert all(is_disjunctive(C, e).holds for e in range(1, d))


def test_hierarchy_examples():
    rep = check_hierarchy(CodeMatrix.identity(5), 2)
    assert all(r.holds for r in rep.table.values())
    assert not rep.violations
    rep = check_hierarchy(CodeMatrix.from_columns(["1100", "1100", "0011", "1010"]), 2)
    assert not any(r.holds for r in rep.table.values())
    assert not rep.violations
    assert len(rep.lines()) == 4


def test_hierarchy_gates_disjunctive_to_uffd_on_small_n():
    rep = check_hierarchy(CodeMatrix.identity(3), 2)
    assert "disjunctive(2) => uffd(2)" in rep.skipped
    assert not rep.violations


def test_hierarchy_raises_on_contradiction(monkeypatch):
    import uffd.properties as props
    from uffd.properties import PropertyReport

    monkeypatch.setattr(props, "is_ssm", lambda C, d, method="closure": PropertyReport("ssm", d, False))
    with pytest.raises(HierarchyViolation):
        check_hierarchy(CodeMatrix.identity(5), 2)
    assert check_hierarchy(CodeMatrix.identity(5), 2, strict=False).violations


def test_hierarchy_random_10x8_weight3():
    rng = np.random.default_rng(108)
    for _ in range(1000):
        C = random_matrix(rng, 10, 8, weight=3)
        assert not check_hierarchy(C, 2).violations

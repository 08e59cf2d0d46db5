import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from recurcommon.baker import certify
from recurcommon.families import FamilyParams, build_case_i
from recurcommon.recurrence import RecurrenceSpec
from recurcommon.search import (
    FAILS,
    HOLDS,
    SearchLimitExceeded,
    audit_ledger,
    check_inequality,
    compare_inequality,
    enumerate_common_values,
    hit_law,
    label_terms,
    self_intersections,
    value_groups,
    verify_no_violation,
)

from conftest import pow2, trib_backward, trib_forward, tribonacci, x2p4


def naive_hits(a, b, N, M, negative=False):
    na = range(-N if negative else 0, N + 1)
    nb = range(-M if negative else 0, M + 1)
    av = label_terms(a, na.start, na.stop)
    bv = label_terms(b, nb.start, nb.stop)
    return sorted((n, m) for n, x in zip(na, av) for m, y in zip(nb, bv) if x == y)


@st.composite
def small_spec(draw):
    c = draw(st.lists(st.integers(-3, 3), min_size=1, max_size=3).filter(lambda c: c[0] != 0))
    g = draw(st.lists(st.integers(-3, 3), min_size=len(c), max_size=len(c)).filter(any))
    return RecurrenceSpec(tuple(c), tuple(g))


def test_counterexample_hits():
    hits = enumerate_common_values(pow2(), x2p4(), 21, 21)
    assert [(h.n, h.m) for h in hits] == [(4 * k + 1, 4 * k) for k in range(6)]
    assert all(h.value == 2 ** h.n for h in hits)


@settings(max_examples=40, deadline=None)
@given(small_spec(), small_spec(), st.integers(0, 60), st.integers(0, 60))
def test_hash_join_matches_double_loop(a, b, N, M):
    got = [(h.n, h.m) for h in enumerate_common_values(a, b, N, M)]
    assert got == naive_hits(a, b, N, M)


@settings(max_examples=40, deadline=None)
@given(small_spec(), small_spec(), st.integers(0, 40))
def test_hit_symmetry(a, b, N):
    ab = {(h.n, h.m) for h in enumerate_common_values(a, b, N, N)}
    ba = {(h.m, h.n) for h in enumerate_common_values(b, a, N, N)}
    assert ab == ba


def test_negative_indices_and_threads():
    a, b = trib_forward(), trib_backward()
    single = enumerate_common_values(a, b, 3000, 3000, include_negative=True)
    many = enumerate_common_values(a, b, 3000, 3000, include_negative=True, threads=4)
    assert single == many
    assert [(h.n, h.m) for h in enumerate_common_values(a, b, 40, 40, include_negative=True)] \
        == naive_hits(a, b, 40, 40, negative=True)


def test_search_limit():
    with pytest.raises(SearchLimitExceeded):
        enumerate_common_values(pow2(), x2p4(), 100, 100, max_terms=50)


def test_tribonacci_value_groups():
    groups = value_groups(tribonacci(), 8)
    assert groups == {0: [-4, -1, 0], 1: [-7, -2, 1, 2], 2: [-5, 3], 4: [-8, 4]}
    pairs = self_intersections(tribonacci(), 8)
    assert (1, 2, 1) in pairs and (-8, 4, 4) in pairs


def test_self_intersections_against_double_loop():
    t = tribonacci()
    N = 100
    vals = label_terms(t, -N, N + 1)
    idx = range(-N, N + 1)
    naive = sorted((n, m, x) for i, (n, x) in enumerate(zip(idx, vals))
                   for m, y in zip(idx[i + 1:], vals[i + 1:]) if x == y)
    assert self_intersections(t, N) == naive


def test_compare_inequality_edges():
    assert compare_inequality(5, 0, 10, 1) == HOLDS      # a_n = 0
    assert compare_inequality(0, 5, 1, 1) == HOLDS       # n < 2
    assert compare_inequality(0, 5, 10, 1) == FAILS      # exact hit
    assert compare_inequality(1, 1, 10, 1) == FAILS      # |a_n| = 1: right side is exactly 1
    assert compare_inequality(1000, 1000, 10, 0) == FAILS
    assert compare_inequality(1001, 1000, 10, 0) == HOLDS


def test_check_inequality(trib_cert):
    assert check_inequality(None, trib_cert, 10, 5) == HOLDS


def test_sweep_failures_are_explained(trib_cert):
    report = verify_no_violation(None, trib_cert, 60, 60)
    hits = {(h.n, h.m) for h in enumerate_common_values(trib_cert.spec_a, trib_cert.spec_b, 60, 60)}
    a = label_terms(trib_cert.spec_a, 0, 61)
    failures = set(report.failures)
    assert {(n, m) for n, m in hits if n >= 2 and a[n]} <= failures
    # the rest sit where |a_n| = 1, so the right side is 1 whatever c_0 is
    assert all(abs(a[n]) == 1 for n, m in failures - hits)
    assert report.failures_explained and not report.undecided
    assert "infeasible" in report.to_dict()["banner"]


def test_sweep_without_hits():
    # a_n = 3 * 2^n is always even past n = 0, b_m from X^2 + X + 2 with b_0 = 5, b_1 = 1 stays odd
    cert = certify(*build_case_i(FamilyParams("CaseI", 1, 2, 1, 2, initial_a=(3,),
                                              initial_b=(5, 1))))
    assert enumerate_common_values(cert.spec_a, cert.spec_b, 30, 30) == []
    report = verify_no_violation(None, cert, 30, 30)
    assert report.failures == [] and report.counts["holds"] == 31 * 31


def test_tiny_sweep_is_vacuous(trib_cert):
    report = verify_no_violation(None, trib_cert, 1, 2)
    assert report.failures == [] and report.vacuous == 6


def test_ledger_audit(trib_cert):
    audit = audit_ledger(trib_cert, 200)
    for name in ("tail_A", "growth_A", "tail_B", "gap_main_B", "gap_B"):
        assert audit[name]["violations"] == [] and audit[name]["undecided"] == []
    assert audit["growth_A"]["checked"] > 150


def test_hit_law_on_tribonacci(trib_cert):
    hits = enumerate_common_values(trib_cert.spec_a, trib_cert.spec_b, 300, 300)
    law = hit_law(trib_cert, hits)
    assert law["above_threshold"] == []
    assert all(e["strong"] for e in law["evidence"])

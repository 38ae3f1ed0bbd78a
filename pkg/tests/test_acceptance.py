"""Acceptance criteria: each test runs its oracle suites at full size and
prints one PASS/FAIL line, repeated in the terminal summary."""

import time

import pytest

from exactcat.oracles import run_suite

SEED = 1


def _check(log, label, suites, limit):
    t = time.perf_counter()
    reports = [run_suite(name, SEED) for name in suites]
    elapsed = time.perf_counter() - t
    cases = sum(r.cases for r in reports)
    failures = sum(len(r.failures) for r in reports)
    ok = failures == 0 and cases > 0 and elapsed <= limit
    line = (f"[{'PASS' if ok else 'FAIL'}] {label}: {cases} cases, {failures} failures, "
            f"{elapsed:.1f}s (limit {limit}s)")
    print("\n" + line)
    log.append(line)
    for r in reports:
        assert r.passed, r.to_json()
    assert elapsed <= limit
    return reports


@pytest.mark.acceptance
def test_criterion_1_tstructure_axioms(acceptance_log):
    (rep,) = _check(acceptance_log, "1 t-structure axioms", ["tstructure-axioms"], 60)
    # 300 truncations and 100 hom-vanishing maps for each of three backends
    assert rep.cases == 3 * (300 + 100)


@pytest.mark.acceptance
def test_criterion_2_fitting(acceptance_log):
    a, b = _check(acceptance_log, "2 Fitting uniqueness and functoriality",
                  ["fitting-uniqueness", "fitting-functoriality"], 30)
    assert b.cases == 200


@pytest.mark.acceptance
def test_criterion_3_idempotent_splitting(acceptance_log):
    (rep,) = _check(acceptance_log, "3 idempotent splitting over the nodal cubic", ["idempotent-splitting"], 120)
    assert rep.cases == 200


@pytest.mark.acceptance
def test_criterion_4_hereditary(acceptance_log):
    (rep,) = _check(acceptance_log, "4 hereditary dichotomy", ["hereditary"], 60)
    assert rep.cases >= 300


@pytest.mark.acceptance
def test_criterion_5_split_contractible(acceptance_log):
    (rep,) = _check(acceptance_log, "5 split-structure contractibility", ["split-contractible"], 10)
    assert rep.cases == 100


@pytest.mark.acceptance
def test_criterion_6_curve_arithmetic(acceptance_log):
    reps = _check(acceptance_log, "6 curve arithmetic",
                  ["degree-monotonicity", "injective-endo", "descent-roundtrip", "global-sections",
                   "pic-enumeration"], 30)
    by = {r.suite: r for r in reps}
    assert by["degree-monotonicity"].cases == 300
    assert by["injective-endo"].cases == 300
    assert by["descent-roundtrip"].cases == 100
    counts = by["pic-enumeration"].details["counts"]
    for q in (2, 3, 5):
        assert counts[f"nodal-cubic/q={q}/d=0"] == q - 1
    for q in (3, 5):
        assert counts[f"two-nodes/q={q}/d=0"] == (q - 1) ** 2


@pytest.mark.acceptance
def test_criterion_7_acyclicity_oracle(acceptance_log):
    (rep,) = _check(acceptance_log, "7 acyclicity oracle equivalence", ["acyclicity"], 120)
    assert rep.details.get("exhaustive_f2") == 2710

"""The nine acceptance criteria, one test each, one PASS/FAIL line each."""

import time

import pytest

from biconseq import suite


@pytest.fixture(scope="module")
def first_run():
    start = time.perf_counter()
    results = suite.run_all()
    results_by_k = {c["criterion"]: c for c in results["criteria"]}
    return results, results_by_k, time.perf_counter() - start


def report(c):
    line = f"criterion {c['criterion']}: {'PASS' if c['passed'] else 'FAIL'}  {c['title']}"
    print("\n" + line)
    return line


@pytest.mark.parametrize("k", range(1, 9))
def test_criterion(first_run, k):
    _, by_k, _ = first_run
    c = by_k[k]
    report(c)
    assert c["passed"], c["details"]


def test_criterion_1_counts_and_runtime(first_run):
    _, by_k, elapsed = first_run
    assert by_k[1]["details"]["semantics_tested"] >= 1000
    # the whole first run includes criterion 1, so this bounds it from above
    assert elapsed < 60


def test_criterion_9(first_run):
    results, _, _ = first_run
    c = suite.criterion_9(suite.to_json(results))
    report(c)
    assert c["passed"]

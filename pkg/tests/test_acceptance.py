"""Acceptance suite: one check per criterion at its stated tolerance.

Every check prints a single ``[PASS]``/``[FAIL]`` line (visible with ``-s``
or in the ``-v`` report) and the test asserts on it.
"""

import time

import pytest

from jumpstat.verification import CHECKS, run_all

RESULTS = {}


@pytest.fixture(scope="module", autouse=True)
def summary():
    yield
    if RESULTS:
        passed = sum(r.passed for r in RESULTS.values())
        print(f"\nacceptance: {passed}/{len(RESULTS)} criteria passed")


@pytest.mark.parametrize("key", sorted(CHECKS))
def test_criterion(key, capsys):
    result = CHECKS[key]()
    RESULTS[key] = result
    with capsys.disabled():
        print("\n" + result.line())
    assert result.passed, result.line()


def test_full_suite_runtime():
    start = time.perf_counter()
    results = run_all()
    elapsed = time.perf_counter() - start
    assert all(r.passed for r in results)
    assert elapsed <= 300.0

"""Acceptance criteria 1-10, each printed as a PASS/FAIL line.

Criterion 2 asks for N_n = 2 from n = 3 on for the doubling map; the exact
counts are n + 1, so that criterion is expected to fail.
"""
import json
import time

import pytest

from cocompact import acceptance

RUNTIME_LIMITS = {1: 2.0, 2: 30.0}
SUITE_LIMIT = 300.0

_results = {}
_timings = {}


def _run(number):
    if number not in _results:
        start = time.perf_counter()
        _results[number] = acceptance.CRITERIA[number](0)
        _timings[number] = time.perf_counter() - start
    return _results[number]


def _report(capsys, result, seconds):
    with capsys.disabled():
        print(f"\n{result.line()}  ({seconds:.2f} s)")


@pytest.mark.parametrize("number", range(1, 10))
def test_criterion(number, capsys):
    result = _run(number)
    _report(capsys, result, _timings[number])
    if not result.passed:
        pytest.fail(json.dumps(result.details, default=str))
    if number in RUNTIME_LIMITS:
        assert _timings[number] < RUNTIME_LIMITS[number]


def test_criterion_10_determinism(capsys):
    first = [_run(k) for k in range(1, 10)]
    start = time.perf_counter()
    result = acceptance.criterion_10(0, first)
    rerun = time.perf_counter() - start
    _report(capsys, result, rerun)
    assert result.passed
    # one full pass of the suite, as `cocompact check --suite all` runs it
    assert sum(_timings.values()) + rerun < SUITE_LIMIT

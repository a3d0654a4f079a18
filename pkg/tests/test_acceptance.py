"""End-to-end acceptance: every criterion, exact comparisons, one line each."""

import pytest

from charvar.audit import CRITERIA, run_criterion

_results = {}


@pytest.fixture(scope="module", autouse=True)
def report_table():
    yield
    print()
    for k in sorted(_results):
        print(_results[k].line())


@pytest.mark.parametrize("number", sorted(CRITERIA), ids=[f"criterion_{k:02d}" for k in sorted(CRITERIA)])
def test_criterion(number, capsys):
    res = run_criterion(number)
    _results[number] = res
    with capsys.disabled():
        print(f"\n{res.line()}")
    assert res.passed, res.detail


def test_all_criteria_listed():
    assert sorted(CRITERIA) == list(range(1, 12))

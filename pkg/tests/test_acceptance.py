"""The eleven acceptance criteria at their stated tolerances, one line each."""

import pytest

from zvseq.acceptance import CRITERIA, run_criterion


@pytest.mark.parametrize("number", range(1, len(CRITERIA) + 1))
def test_criterion(number, report_criterion):
    res = run_criterion(number)
    print(res.line())
    report_criterion(res.line())
    assert res.passed, res.line()

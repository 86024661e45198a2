"""Acceptance gate: every published-value criterion, one test per criterion.

Each test prints a PASS/FAIL line (visible with pytest -s) and enforces both
exactness and the criterion's time budget.  `multinom verify-paper` runs the
same suite from the command line.
"""

import pytest

from multinom import verify

KEYS = [c[0] for c in verify.CRITERIA]


@pytest.mark.parametrize("key", KEYS)
def test_criterion(key):
    (result,) = verify.run_criteria([key])
    status = "PASS" if result.ok else "FAIL"
    print(f"{status} {result.key} ({result.millis:.0f} ms, budget {result.budget_s:.0f} s) - {result.detail}")
    assert result.ok, f"{result.key}: {result.detail}"

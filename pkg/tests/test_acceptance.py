"""Acceptance gate: every criterion at its stated tolerance and runtime budget.

Run ``pytest tests/test_acceptance.py -s`` to see one PASS/FAIL line per criterion.
"""
import subprocess
import sys

import pytest

from compass_cqed.selfcheck import CHECKS, run_check

# seconds allowed per criterion; None where no budget is stated
BUDGETS = {1: 1.0, 2: 30.0, 3: 120.0, 4: None, 5: None, 6: 60.0, 7: None, 8: 60.0, 9: None, 10: None}


@pytest.mark.parametrize("check", CHECKS, ids=[f"criterion_{i:02d}" for i in range(1, len(CHECKS) + 1)])
def test_criterion(check):
    result = run_check(check)
    print("\n" + result.line())
    assert result.passed, result.line()
    budget = BUDGETS[result.number]
    if budget is not None:
        assert result.seconds < budget, f"criterion {result.number} took {result.seconds:.1f}s (budget {budget}s)"


def test_selftest_command_reports_all_criteria():
    proc = subprocess.run([sys.executable, "-m", "compass_cqed", "selftest"], capture_output=True, text=True)
    print("\n" + proc.stdout)
    assert proc.returncode == 0, proc.stdout + proc.stderr
    lines = [ln for ln in proc.stdout.splitlines() if ln.startswith("[")]
    assert len(lines) == 10 and all(ln.startswith("[PASS]") for ln in lines)
    assert "10/10 criteria passed" in proc.stdout

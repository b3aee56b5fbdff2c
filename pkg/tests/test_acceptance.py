"""The fourteen acceptance criteria at their stated tolerances.

Each test prints one PASS/FAIL line; the lines are also collected into an
"acceptance criteria" section at the end of the pytest run.
"""

import pytest

from fracspace.acceptance import CRITERIA, run_criterion


@pytest.mark.parametrize("number", sorted(CRITERIA), ids=lambda n: f"criterion_{n:02d}")
def test_criterion(number, record_property):
    result = run_criterion(number)
    print(result.line())
    record_property("criterion_line", result.line())
    failing = [r.summary() for r in result.reports if not r.passed]
    assert result.passed, "\n".join([result.line(), *failing])

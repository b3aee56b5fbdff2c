import json
import math

import numpy as np
import pytest

from fracspace.acceptance import CriterionResult, at_least
from fracspace.extended import EXTENDED, run_extended
from fracspace.reports import CheckReport


def _r(gap, tol=1e-6, check="c"):
    return CheckReport(check, {"a": 1}, np.array([1.0 + 2j]), 0.0, gap, tol, {"n": np.int64(3)})


@pytest.mark.parametrize("gap, passed", [(0.0, True), (1e-6, True), (2e-6, False), (math.nan, False)])
def test_check_report_pass_rule(gap, passed):
    assert _r(gap).passed is passed


def test_check_report_json():
    d = json.loads(_r(1e-7).to_json())
    assert d["pass"] is True
    assert d["diagnostics"]["n"] == 3
    assert _r(1e-7).summary().startswith("PASS c:")


def test_at_least_inverts_threshold():
    assert at_least(_r(0.5), 1e-2).passed
    assert not at_least(_r(1e-3), 1e-2).passed


def test_criterion_result_line_and_worst():
    res = CriterionResult(3, "demo", [_r(1e-8, check="small"), _r(5e-7, check="big"),
                                      at_least(_r(0.5, check="ctrl"), 1e-2)], 1.25)
    assert res.passed
    assert res.worst.check == "big"
    assert res.line().startswith("criterion  3 PASS  demo: 3 checks, 0 failing, worst big")
    assert res.to_dict()["criterion"] == 3
    assert not CriterionResult(4, "empty").passed


def test_extended_checks_pass():
    results = run_extended()
    assert [r.number for r in results] == list(EXTENDED)
    for r in results:
        assert r.passed, r.line()
        assert r.line().startswith(f"extended {r.number} PASS")

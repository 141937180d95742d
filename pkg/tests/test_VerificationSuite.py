#!/usr/bin/env python3
# tab-width:4

from __future__ import annotations

import pytest

from diastasistool.CalabiAnalysis import CalabiError
from diastasistool.VerificationSuite import CHECKS
from diastasistool.VerificationSuite import SCHEMA_VERSION
from diastasistool.VerificationSuite import Status
from diastasistool.VerificationSuite import VerificationError
from diastasistool.VerificationSuite import run_check
from diastasistool.VerificationSuite import run_suite


class TestRegistry:
    def test_expected_checks(self):
        assert {
            "wallach",
            "psi_expansion",
            "propalphamu",
            "dual_trick",
            "block_structure",
            "compactification",
            "flag_pipeline",
            "u21_blowup",
            "ricci_duality",
            "ode_residual",
            "product_arithmetic",
        } <= set(CHECKS)

    def test_refuting_checks(self):
        assert CHECKS["propalphamu"][1]
        assert CHECKS["u21_blowup"][1]
        assert not CHECKS["dual_trick"][1]

    def test_unknown_check(self):
        with pytest.raises(VerificationError):
            run_check("nonesuch", 8)


class TestRunCheck:
    @pytest.mark.parametrize("name", ["wallach", "psi_expansion", "dual_trick", "product_arithmetic"])
    def test_pass(self, name):
        assert run_check(name, 8).status is Status.PASS

    def test_psi_alternation_recorded(self):
        result = run_check("psi_expansion", 8)
        assert result.witness["strict_alternation_through"] == 20
        assert result.witness["alternates_from"] == 1

    def test_refuted_as_expected(self):
        assert run_check("propalphamu", 8).status is Status.REFUTED_AS_EXPECTED

    def test_failure_is_recorded(self, monkeypatch):
        def broken(order: int) -> dict:
            raise CalabiError("broken: forced")

        monkeypatch.setitem(CHECKS, "broken", (broken, False))
        result = run_check("broken", 8)
        assert result.status is Status.FAIL
        assert "forced" in result.witness["error"]

    def test_timings(self):
        assert run_check("wallach", 8, timings=True).seconds is not None
        assert run_check("wallach", 8).seconds is None


class TestRunSuite:
    def test_report(self, monkeypatch):
        def broken(order: int) -> dict:
            raise VerificationError("broken: forced")

        monkeypatch.setitem(CHECKS, "broken", (broken, False))
        report = run_suite(order=8, only=["wallach", "broken"])
        assert not report.passed
        assert report.failures == ("broken",)
        record = report.as_dict()
        assert record["schema_version"] == SCHEMA_VERSION
        assert record["checks"]["wallach"]["status"] == "pass"
        assert record["checks"]["broken"]["status"] == "fail"

    def test_selected_checks_pass(self):
        report = run_suite(order=8, only=["dual_trick", "propalphamu", "ode_residual"])
        assert report.passed
        assert [check.name for check in report.checks] == ["dual_trick", "propalphamu", "ode_residual"]

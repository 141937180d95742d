#!/usr/bin/env python3
# tab-width:4

from __future__ import annotations

import json

import pytest
from click.testing import CliRunner

from diastasistool.cli import APP_NAME
from diastasistool.cli import LAST_VERIFY
from diastasistool.cli import cli


@pytest.fixture
def config_home(tmp_path, monkeypatch):
    monkeypatch.setenv("XDG_CONFIG_HOME", str(tmp_path))
    return tmp_path


def invoke(args: list[str]):
    return CliRunner().invoke(cli, args, obj={})


def payload(result) -> dict:
    lines = [line for line in result.output.splitlines() if line.startswith("{")]
    return json.loads(lines[-1])


class TestWallach:
    def test_membership(self, config_home):
        result = invoke(["wallach", "--domain", "III:2", "--point", "1/3", "--json"])
        assert result.exit_code == 0
        (record,) = payload(result)["domains"]
        assert record["r"] == 2
        assert record["member"] is False

    def test_bad_domain(self, config_home):
        result = invoke(["wallach", "--domain", "bogus"])
        assert result.exit_code == 1


class TestDecide:
    def test_dual_refutation(self, config_home):
        result = invoke(["decide", "--domain", "CH1", "--metric", "dual_g", "--alpha", "2", "--mu", "1/2", "--json"])
        assert result.exit_code == 0
        record = payload(result)
        assert record["decision"]["verdict"] is False
        assert record["refutation"]["route"] == "psi"
        assert record["refutation"]["witness"]["first_negative"] == 2
        assert record["refutation"]["witness"]["first_negative_value"] == "-1/4"

    def test_wallach_rule(self, config_home):
        result = invoke(["decide", "--domain", "I:2x2", "--metric", "g", "--mu", "1/3"])
        assert result.exit_code == 0
        assert "verdict: False" in result.output
        assert "minimal integer alpha: 3" in result.output

    def test_bad_rational(self, config_home):
        result = invoke(["decide", "--domain", "CH1", "--alpha", "x/y"])
        assert result.exit_code == 2


class TestSeries:
    def test_dual_of_disc_potential(self, config_home):
        result = invoke(["dual", "--domain", "CH1", "--mu", "1", "--order", "4", "--json"])
        assert result.exit_code == 0
        assert payload(result)["series"]["nvars"] == 2

    def test_no_forbidden(self, config_home):
        result = invoke(["forbidden", "--domain", "CH1", "--mu", "1", "--order", "6"])
        assert result.exit_code == 0
        assert "no forbidden monomial" in result.output

    def test_expand_refutes(self, config_home):
        result = invoke(["expand", "--domain", "I:2x2", "--metric", "ghat", "--mu", "1/3", "--order", "4", "--json"])
        assert result.exit_code == 0
        assert payload(result)["projective"]["verdict"] == "REFUTED"


class TestFlag:
    def test_minors(self, config_home):
        result = invoke(["flag", "minors", "--group", "SU3", "--black", "1,2"])
        assert result.exit_code == 0
        assert "Delta_1 =" in result.output
        assert "Delta_2 =" in result.output

    def test_verdict(self, config_home):
        result = invoke(["flag", "verdict", "--group", "SU3", "--black", "1,2", "--coefficients", "1,2", "--json"])
        assert result.exit_code == 0
        assert payload(result)["verdict"] == "NO_DUAL"

    def test_lemma_on_symmetric_node(self, config_home):
        result = invoke(["flag", "lemma", "--group", "Sp3", "--black", "1"])
        assert result.exit_code == 1


class TestCH:
    def test_compactify(self, config_home):
        result = invoke(["ch", "compactify", "--mu", "2", "--json"])
        assert result.exit_code == 0
        assert payload(result)["veronese_weights"] == [1, 2, 1]

    def test_blocks(self, config_home):
        result = invoke(["ch", "blocks", "--base", "CH1", "--mu", "1", "--alpha", "2", "--json"])
        assert result.exit_code == 0
        assert payload(result)["fiber_coefficients"] == ["2", "3", "4"]


class TestCurvature:
    def test_ricci_ke(self, config_home):
        result = invoke(["curvature", "ricci", "--domain", "CH1", "--mu", "1", "--lambda", "3", "--order", "6"])
        assert result.exit_code == 0
        assert "duality: True" in result.output
        assert "KE with constant -3: True" in result.output

    def test_u21_example(self, config_home):
        result = invoke(["curvature", "hideyuki", "--check", "all", "--json"])
        assert result.exit_code == 0
        record = payload(result)
        assert record["flags"] == {"h": True, "k": True, "blowup": True}
        assert record["checks"]["k_p_exponent"] == 3

    def test_u21_alias(self, config_home):
        result = invoke(["curvature", "u21", "--check", "h"])
        assert result.exit_code == 0
        assert "h: pass" in result.output


class TestVerify:
    def test_report_written(self, config_home):
        result = invoke(["verify-paper", "--check", "dual_trick", "--check", "wallach", "--json"])
        assert result.exit_code == 0
        record = payload(result)
        assert record["passed"] is True
        assert sorted(record["checks"]) == ["dual_trick", "wallach"]
        stored = json.loads((config_home / APP_NAME / LAST_VERIFY).read_text())
        assert stored == record

    def test_short_alias(self, config_home):
        result = invoke(["verify", "--check", "wallach"])
        assert result.exit_code == 0
        assert "PASS" in result.output

    def test_order_bounds(self, config_home):
        result = invoke(["verify", "--order", "2"])
        assert result.exit_code == 2

#!/usr/bin/env python3
# tab-width:4

from __future__ import annotations

from fractions import Fraction

import pytest

from diastasistool.CartanDomain import parse_cartan
from diastasistool.CartanDomain import parse_domain
from diastasistool.CHMetrics import CHDomain
from diastasistool.Inducibility import InducibilityError
from diastasistool.Inducibility import Rule
from diastasistool.Inducibility import binomial_witness
from diastasistool.Inducibility import cross_validate
from diastasistool.Inducibility import csc_condition
from diastasistool.Inducibility import csc_sum
from diastasistool.Inducibility import decide
from diastasistool.Inducibility import decide_dual_finite
from diastasistool.Inducibility import decide_g_infinite
from diastasistool.Inducibility import decide_ghat_infinite
from diastasistool.Inducibility import dual_refutation
from diastasistool.Inducibility import ke_condition
from diastasistool.Inducibility import minimal_alpha
from diastasistool.Inducibility import ode_residual
from diastasistool.Inducibility import propalphamu_witness
from diastasistool.Inducibility import psi_expansion
from diastasistool.Inducibility import psi_ratio_limit

HALF = Fraction(1, 2)
THIRD = Fraction(1, 3)


class TestWallachDecisions:
    def test_g_siegel(self):
        domain = parse_cartan("III:2")
        assert decide_g_infinite(domain, 1, HALF).verdict
        refused = decide_g_infinite(domain, 1, THIRD)
        assert not refused.verdict
        assert refused.failing == ("s=0", THIRD)

    def test_ghat_shift(self):
        domain = parse_cartan("I:2x2")
        assert not decide_ghat_infinite(domain, 1, THIRD).verdict
        decision = decide_ghat_infinite(domain, 1, HALF)
        assert decision.verdict
        assert decision.rule is Rule.WALLACH_GHAT

    def test_ball_always_induced(self):
        assert decide(parse_cartan("CH2"), "g", THIRD, THIRD).verdict

    def test_product_checks_every_factor(self):
        domain = parse_domain("prod:[CH1,I:2x2]:mu=[1,1/3]")
        decision = decide(domain, "g", 1)
        assert not decision.verdict
        assert decision.failing[0].startswith("I:2x2")

    def test_minimal_alpha(self):
        domain = parse_cartan("I:2x2")
        assert minimal_alpha(domain, THIRD, "g") == 3
        assert minimal_alpha(domain, THIRD, "ghat") == 2

    def test_alpha_must_be_positive(self):
        with pytest.raises(InducibilityError):
            decide_g_infinite(parse_cartan("CH1"), 0, 1)


class TestDualIntegrality:
    def test_integers(self):
        assert decide_dual_finite(2, Fraction(3)).verdict

    def test_fractional_mu(self):
        decision = decide_dual_finite(2, HALF)
        assert not decision.verdict
        assert decision.failing == ("mu", HALF)


class TestExpansions:
    def test_psi(self):
        witness = psi_expansion(1, 2, 1, 6)
        assert witness.coefficients[:3] == (4, 2, Fraction(-1, 4))
        assert witness.first_negative == 2

    @pytest.mark.parametrize("h", range(1, 21))
    def test_psi_signs_alternate(self, h):
        witness = psi_expansion(1, 2, 1, 20)
        assert (-1) ** (h + 1) * witness.coefficients[h] > 0

    def test_psi_ratio_tends_to_one(self):
        report = psi_ratio_limit(1, 2, 1, 8)
        assert report.ratios[5] == 1
        assert report.alternates_from == 1

    def test_psi_integer_exponent_rejected(self):
        with pytest.raises(InducibilityError):
            psi_ratio_limit(2, 1, 1, 6)

    def test_propalphamu(self):
        witness = propalphamu_witness(1, 1, 1, 4)
        assert witness.coefficients[0] == 1
        assert witness.first_negative_value == Fraction(-1, 16)

    def test_coprime_required(self):
        with pytest.raises(InducibilityError):
            psi_expansion(2, 4, 1, 4)

    def test_binomial(self):
        witness = binomial_witness(HALF, 2)
        assert witness.coefficients == (1, HALF, Fraction(-1, 8))
        assert witness.first_negative == 2


class TestDualRefutation:
    def test_psi_route(self):
        refutation = dual_refutation(2, HALF, "g_star")
        assert refutation.route == "psi"
        assert refutation.witness.first_negative_value == Fraction(-1, 4)

    def test_propalphamu_route(self):
        refutation = dual_refutation(1, HALF, "ghat_star")
        assert refutation.route == "propalphamu"
        assert refutation.witness.first_negative_value == Fraction(-1, 16)

    def test_binomial_routes(self):
        assert dual_refutation(HALF, 1, "g_star").route == "fiber-axis binomial"
        assert dual_refutation(1, HALF, "g_star").route == "base-axis binomial"

    def test_integral_parameters(self):
        assert dual_refutation(2, 3, "g_star") is None

    def test_plain_kind_rejected(self):
        with pytest.raises(InducibilityError):
            dual_refutation(1, HALF, "g")


class TestEinstein:
    def test_ball_equality(self):
        condition = ke_condition(CHDomain(parse_cartan("CH2"), 1))
        assert condition.mu_ke == 1
        assert condition.ratio_equality

    def test_higher_rank(self):
        condition = ke_condition(parse_cartan("I:2x2"))
        assert condition.mu_ke == Fraction(4, 5)
        assert not condition.ratio_equality
        assert condition.check(Fraction(4, 5))

    def test_csc(self):
        assert csc_sum(parse_domain("prod:[CH1,CH1]:mu=[1,1]")) == 2
        assert csc_condition(parse_domain("prod:[CH1,CH1]:mu=[2/3,2/3]"))

    def test_ode_residual_not_constant(self):
        residual = ode_residual(2, 1, 1)
        assert not residual.constant
        assert residual.certificate == ((0, HALF), (1, HALF))


class TestCrossValidation:
    def test_ball_agrees(self):
        report = cross_validate(parse_cartan("CH1"), 1, 1, "ghat", 6)
        assert report.decision.verdict
        assert not report.projective.refuted

    def test_refusal_agrees(self):
        report = cross_validate(parse_cartan("I:2x2"), 1, THIRD, "ghat", 4)
        assert not report.decision.verdict
        assert report.projective.refuted

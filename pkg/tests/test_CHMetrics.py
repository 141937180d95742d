#!/usr/bin/env python3
# tab-width:4

from __future__ import annotations

from fractions import Fraction

import pytest

from diastasistool.CalabiAnalysis import dual_diastasis
from diastasistool.CartanDomain import parse_cartan
from diastasistool.CartanDomain import parse_domain
from diastasistool.CHMetrics import CHDomain
from diastasistool.CHMetrics import CHMetricError
from diastasistool.CHMetrics import PotentialKind
from diastasistool.CHMetrics import ch_potential
from diastasistool.CHMetrics import fiber_derivative_identity
from diastasistool.CHMetrics import metric_sum_identity
from diastasistool.CHMetrics import rank1_compactification_check
from diastasistool.CHMetrics import rising_factorial
from diastasistool.CHMetrics import verify_block_structure
from diastasistool.CHMetrics import veronese_norm
from diastasistool.HermSeries import HermSeries
from diastasistool.HermSeries import series_log


def disc_over_disc(mu=1) -> CHDomain:
    return CHDomain(parse_cartan("CH1"), Fraction(mu))


class TestCHDomain:
    def test_fiber_is_last_slot(self):
        d = CHDomain.over(parse_cartan("I:2x2"), Fraction(1, 2))
        assert d.nvars == 5
        assert d.fiber == 4

    def test_product_exponents_must_agree(self):
        base = parse_domain("prod:[CH1,CH1]:mu=[1,2]")
        with pytest.raises(CHMetricError):
            CHDomain(base, (Fraction(1), Fraction(1)))
        assert CHDomain.over(base).mu_vector == (1, 2)

    def test_vector_mu_needs_product(self):
        with pytest.raises(CHMetricError):
            CHDomain(parse_cartan("CH1"), (Fraction(1), Fraction(1)))

    def test_mu_positive(self):
        with pytest.raises(CHMetricError):
            disc_over_disc(0)


class TestPotentials:
    def test_g_over_disc_is_ball(self):
        expected = -series_log(
            HermSeries(2, 6, {((0, 0), (0, 0)): 1, ((1, 0), (1, 0)): -1, ((0, 1), (0, 1)): -1})
        )
        assert ch_potential(disc_over_disc(), PotentialKind.G, 6).series == expected

    @pytest.mark.parametrize("plain, dual", [("g", "g_star"), ("ghat", "ghat_star")])
    def test_duals_agree_with_dual_trick(self, plain, dual):
        d = disc_over_disc(Fraction(3, 2))
        assert dual_diastasis(ch_potential(d, plain, 6).diastasis) == ch_potential(d, dual, 6).diastasis


class TestBlockStructure:
    def test_fiber_coefficients(self):
        p = ch_potential(disc_over_disc(), "ghat", 6)
        assert verify_block_structure(p, 3).fiber_coefficients == (1, 1, 1)
        assert verify_block_structure(p, 3, alpha=2).fiber_coefficients == (2, 3, 4)

    def test_dual_kind_rejected(self):
        p = ch_potential(disc_over_disc(), "g_star", 6)
        with pytest.raises(CHMetricError):
            verify_block_structure(p, 3)


class TestIdentities:
    def test_rising_factorial(self):
        assert rising_factorial(Fraction(1, 2), 3) == Fraction(15, 8)
        assert rising_factorial(Fraction(5), 0) == 1

    def test_fiber_derivative(self):
        assert fiber_derivative_identity(1, 2).factor == 4
        assert fiber_derivative_identity(Fraction(1, 2), 1, order=4).factor == Fraction(1, 2)

    def test_metric_sum(self):
        assert metric_sum_identity(disc_over_disc(2), 6).base_equal

    def test_compactification(self):
        assert rank1_compactification_check(2).veronese_weights == (1, 2, 1)
        with pytest.raises(CHMetricError):
            rank1_compactification_check(Fraction(1, 2))

    def test_veronese_norm(self):
        assert veronese_norm((1, 2, 1), 6) == HermSeries.radial((1, 2, 1), 6)

    def test_cubic_compactification(self):
        assert rank1_compactification_check(3, order=8).veronese_weights == (1, 3, 3, 1)

    @pytest.mark.parametrize("weights", [(1, 1, 1), (1, 2), (1, 3, 3, 1), (2, 4, 2)])
    def test_wrong_weights_rejected(self, weights):
        with pytest.raises(CHMetricError):
            rank1_compactification_check(2, order=6, weights=weights)

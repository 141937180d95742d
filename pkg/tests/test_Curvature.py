#!/usr/bin/env python3
# tab-width:4

from __future__ import annotations

from fractions import Fraction

import pytest

from diastasistool.CalabiAnalysis import Diastasis
from diastasistool.CalabiAnalysis import normalize_diastasis
from diastasistool.CartanDomain import parse_cartan
from diastasistool.CHMetrics import CHDomain
from diastasistool.CHMetrics import ch_potential
from diastasistool.Curvature import BISECTION_WIDTH
from diastasistool.Curvature import CURVE_VARIABLES
from diastasistool.Curvature import CurvatureError
from diastasistool.Curvature import blowup_witness
from diastasistool.Curvature import denominator_exponent
from diastasistool.Curvature import fubini_study_curve
from diastasistool.Curvature import hyperbolic_curve
from diastasistool.Curvature import ke_defect
from diastasistool.Curvature import metric_along_curve
from diastasistool.Curvature import restrict_to_line
from diastasistool.Curvature import ricci_duality_check
from diastasistool.Curvature import ricci_series
from diastasistool.Curvature import scalar_curvature_series
from diastasistool.Curvature import scalar_duality_check
from diastasistool.Curvature import sectional_curvature_along_curve
from diastasistool.Curvature import u21_report
from diastasistool.GRat import grat
from diastasistool.HermSeries import HermSeries
from diastasistool.HermSeries import series_log
from diastasistool.RationalFunction import RationalFunction


def _curve(name: str) -> RationalFunction:
    return RationalFunction.variable(CURVE_VARIABLES, name)


def _line() -> RationalFunction:
    return RationalFunction.variable(("x",), "x")


def disc(order: int) -> Diastasis:
    return normalize_diastasis(-series_log(HermSeries.radial((1, -1), order)))


def sphere(order: int) -> Diastasis:
    return normalize_diastasis(series_log(HermSeries.radial((1, 1), order)))


class TestCurves:
    def test_fubini_study(self):
        h = metric_along_curve(fubini_study_curve())
        assert h == 1 / ((1 + _curve("z") * _curve("zb")) ** 2)
        assert sectional_curvature_along_curve(h) == RationalFunction.constant(CURVE_VARIABLES, 2)

    def test_hyperbolic(self):
        h = metric_along_curve(hyperbolic_curve())
        assert h == 1 / ((1 - _curve("z") * _curve("zb")) ** 2)
        assert sectional_curvature_along_curve(h) == RationalFunction.constant(CURVE_VARIABLES, -2)

    def test_restrict(self):
        x = _line()
        h = metric_along_curve(fubini_study_curve())
        assert restrict_to_line(h, 1) == 1 / ((1 + x * x) ** 2)
        assert restrict_to_line(h, grat(0, 1)) == 1 / ((1 + x * x) ** 2)

    def test_zero_direction(self):
        with pytest.raises(CurvatureError):
            restrict_to_line(metric_along_curve(fubini_study_curve()), 0)


class TestBlowup:
    def test_irrational_root(self):
        x = _line()
        k = 1 / ((2 - 4 * x * x) ** 2)
        witness = blowup_witness(k, (2, 0, -4))
        assert witness.x0_low ** 2 < Fraction(1, 2) < witness.x0_high ** 2
        assert witness.width <= BISECTION_WIDTH
        assert witness.r_degree == 0
        assert witness.divergence

    def test_no_root_in_unit_interval(self):
        x = _line()
        with pytest.raises(CurvatureError):
            blowup_witness(1 / ((1 + x * x) ** 2), (1, 0, 1))

    def test_simple_pole(self):
        x = _line()
        witness = blowup_witness(1 / (2 - 4 * x * x), (2, 0, -4))
        assert witness.p_exponent == 1
        assert witness.r_degree == 0
        assert witness.r_positive_coefficients
        assert witness.divergence

    def test_cubic_pole_exponent(self):
        x = _line()
        k = (1 + x * x) / ((2 - 4 * x * x) ** 3)
        assert denominator_exponent(k, (2, 0, -4)) == 3
        witness = blowup_witness(k, (2, 0, -4))
        assert witness.p_exponent == 3
        assert witness.r_degree == 2
        assert witness.divergence

    def test_foreign_denominator_factor(self):
        x = _line()
        k = 1 / ((2 - 4 * x * x) * (3 + x))
        assert denominator_exponent(k, (2, 0, -4)) is None
        with pytest.raises(CurvatureError):
            blowup_witness(k, (2, 0, -4))

    def test_pole_free_curvature(self):
        x = _line()
        with pytest.raises(CurvatureError):
            blowup_witness(1 + x * x, (2, 0, -4))

    def test_u21_dual(self):
        report = u21_report()
        assert report.h_matches
        assert report.h_at_zero == 3
        assert report.r_degree == 36
        assert report.k_p_exponent == 3
        assert report.witness.p_exponent == 3
        assert report.witness.divergence
        assert report.passed


class TestRicci:
    def test_disc_is_einstein(self):
        ricci = ricci_series(disc(8), 8)
        assert ricci.order == 6
        assert ricci.potential.series == disc(8).series.truncate(6).scale(2)

    def test_sphere(self):
        assert not ke_defect(sphere(8), -2, 8)

    def test_ball(self):
        ball = ch_potential(CHDomain(parse_cartan("CH1"), 1), "g", 8).diastasis
        assert not ke_defect(ball, 3, 8)

    def test_modified_metric_not_einstein(self):
        d = ch_potential(CHDomain(parse_cartan("CH1"), 2), "ghat", 8).diastasis
        assert ke_defect(d, 3, 8)

    def test_permutation_equivariant(self):
        d = ch_potential(CHDomain(parse_cartan("CH1"), 2), "g", 8).diastasis
        swapped = Diastasis(d.series.permute((1, 0)))
        assert ricci_series(swapped, 8).potential.series == ricci_series(d, 8).potential.series.permute((1, 0))

    def test_duality(self):
        assert ricci_duality_check(disc(8), 8).order == 6
        d = ch_potential(CHDomain(parse_cartan("CH1"), Fraction(1, 2)), "ghat", 6).diastasis
        ricci_duality_check(d, 6)

    def test_degenerate_metric(self):
        flat = Diastasis(HermSeries(1, 8, {((2,), (2,)): 1}))
        with pytest.raises(CurvatureError):
            ricci_series(flat, 8)

    def test_order_too_low(self):
        with pytest.raises(CurvatureError):
            ricci_series(disc(4), 6)


class TestScalarCurvature:
    def test_constant_curvature(self):
        assert scalar_curvature_series(disc(8), 8) == HermSeries.constant(1, 4, -2)
        assert scalar_curvature_series(sphere(8), 8) == HermSeries.constant(1, 4, 2)

    def test_duality(self):
        assert scalar_duality_check(disc(8), 8).order == 4

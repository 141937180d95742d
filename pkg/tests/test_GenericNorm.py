#!/usr/bin/env python3
# tab-width:4

from __future__ import annotations

import pytest

from diastasistool.CalabiAnalysis import normalize_diastasis
from diastasistool.CartanDomain import DomainError
from diastasistool.CartanDomain import parse_cartan
from diastasistool.CartanDomain import parse_domain
from diastasistool.Curvature import ricci_series
from diastasistool.GenericNorm import generic_norm_series
from diastasistool.GenericNorm import permutation_sign
from diastasistool.GRat import grat
from diastasistool.HermSeries import HermSeries
from diastasistool.HermSeries import series_log


def ball(n: int, order: int) -> HermSeries:
    origin = (0,) * n
    coeffs = {(origin, origin): 1}
    for i in range(n):
        unit = tuple(1 if s == i else 0 for s in range(n))
        coeffs[(unit, unit)] = -1
    return HermSeries(n, order, coeffs)


class TestGenericNorm:
    def test_row_matrix_is_ball(self):
        assert generic_norm_series(parse_cartan("I:1x2"), 6) == ball(2, 6)

    def test_skew_two_by_two_is_disc(self):
        assert generic_norm_series(parse_cartan("II:2"), 8) == ball(1, 8)

    def test_two_by_two_determinant_term(self):
        norm = generic_norm_series(parse_cartan("I:2x2"), 4)
        assert norm.coefficient((1, 0, 0, 1), (1, 0, 0, 1)) == grat(1)
        assert norm.coefficient((1, 0, 0, 1), (0, 1, 1, 0)) == grat(-1)
        assert norm.is_hermitian()

    def test_lie_ball(self):
        norm = generic_norm_series(parse_cartan("IV:3"), 4)
        assert norm.coefficient((1, 0, 0), (1, 0, 0)) == grat(-2)
        assert norm.coefficient((2, 0, 0), (0, 2, 0)) == grat(1)

    def test_product_blocks(self):
        norm = generic_norm_series(parse_domain("prod:[CH1,CH1]:mu=[1,2]"), 4)
        assert norm.coefficient((0, 1), (0, 1)) == grat(-2)
        assert norm.coefficient((1, 1), (1, 1)) == grat(2)

    def test_exceptional_has_no_provider(self):
        with pytest.raises(DomainError):
            generic_norm_series(parse_cartan("EVI"), 4)


def test_permutation_sign():
    assert permutation_sign((0, 1, 2)) == 1
    assert permutation_sign((1, 0, 2)) == -1
    assert permutation_sign((1, 2, 0)) == 1
    assert permutation_sign((1, 2, 3, 0)) == -1
    assert permutation_sign((3, 2, 1, 0)) == 1


class TestEinstein:
    @pytest.mark.parametrize("text", ["I:2x2", "III:2", "IV:3"])
    def test_log_det_is_genus_multiple(self, text):
        domain = parse_cartan(text)
        d = normalize_diastasis(-series_log(generic_norm_series(domain, 6)))
        ricci = ricci_series(d, 6)
        assert ricci.potential.series == d.series.truncate(ricci.order).scale(domain.gamma)

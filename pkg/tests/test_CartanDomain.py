#!/usr/bin/env python3
# tab-width:4

from __future__ import annotations

from fractions import Fraction

import pytest

from diastasistool.CartanDomain import DomainError
from diastasistool.CartanDomain import Family
from diastasistool.CartanDomain import ProductDomain
from diastasistool.CartanDomain import catalog
from diastasistool.CartanDomain import parse_cartan
from diastasistool.CartanDomain import parse_domain
from diastasistool.CartanDomain import structural_constants
from diastasistool.CartanDomain import wallach_member


class TestStructuralConstants:
    @pytest.mark.parametrize(
        "text, expected",
        [
            ("CH3", (1, 2, 2, 3, 4)),
            ("I:2x3", (2, 2, 1, 6, 5)),
            ("II:5", (2, 4, 2, 10, 8)),
            ("III:2", (2, 1, 0, 3, 3)),
            ("IV:4", (2, 2, 0, 4, 4)),
            ("EVII", (3, 8, 0, 27, 18)),
        ],
    )
    def test_table(self, text, expected):
        domain = parse_cartan(text)
        assert (domain.r, domain.a, domain.b, domain.n, domain.gamma) == expected

    def test_catalog_is_consistent(self):
        for domain in catalog(4):
            assert domain.gamma == (domain.r - 1) * domain.a + domain.b + 2

    def test_bad_sizes(self):
        with pytest.raises(DomainError):
            structural_constants(Family.IV, 2)
        with pytest.raises(DomainError):
            structural_constants(Family.I, 2)


class TestWallach:
    def test_siegel_half_plane(self):
        w = parse_cartan("III:2").wallach
        assert w.threshold == Fraction(1, 2)
        assert w.discrete == (0, Fraction(1, 2))
        assert not wallach_member(w, Fraction(1, 3))
        assert wallach_member(w, Fraction(1, 2))
        assert wallach_member(w, Fraction(3, 4))

    def test_exclude_zero(self):
        w = parse_cartan("I:2x2").wallach
        assert wallach_member(w, 0)
        assert not wallach_member(w, 0, exclude_zero=True)

    def test_negative_point(self):
        with pytest.raises(DomainError):
            wallach_member(parse_cartan("CH1").wallach, -1)


class TestParse:
    def test_product(self):
        domain = parse_domain("prod:[CH1,I:2x2]:mu=[1,1/2]")
        assert isinstance(domain, ProductDomain)
        assert domain.n == 5
        assert domain.offsets == (0, 1)
        assert domain.exponents == (1, Fraction(1, 2))

    def test_product_arity_mismatch(self):
        with pytest.raises(DomainError):
            parse_domain("prod:[CH1,CH2]:mu=[1]")

    def test_unknown(self):
        with pytest.raises(DomainError):
            parse_domain("bogus")

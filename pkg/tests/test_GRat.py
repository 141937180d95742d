#!/usr/bin/env python3
# tab-width:4

from __future__ import annotations

from fractions import Fraction

import pytest
from sympy.polys.domains import QQ

from diastasistool.GRat import GRatError
from diastasistool.GRat import conjugate_grat
from diastasistool.GRat import format_grat
from diastasistool.GRat import grat
from diastasistool.GRat import is_real
from diastasistool.GRat import parse_grat
from diastasistool.GRat import parse_rational
from diastasistool.GRat import to_fraction


class TestFormat:
    def test_real(self):
        assert format_grat(grat(Fraction(-3, 4))) == "-3/4"

    def test_gaussian(self):
        assert format_grat(grat(1, -2)) == "1-2 i"
        assert format_grat(grat(Fraction(1, 2), 3)) == "1/2+3 i"

    def test_pure_imaginary(self):
        assert format_grat(grat(0, 1)) == "1 i"


class TestParse:
    def test_bare_i(self):
        assert parse_grat("i") == grat(0, 1)
        assert parse_grat("-i") == grat(0, -1)

    def test_negative_imaginary_fraction(self):
        assert parse_grat("-3/4 i") == grat(0, Fraction(-3, 4))

    def test_mixed(self):
        assert parse_grat("1-2 i") == grat(1, -2)
        assert parse_grat("5") == grat(5)

    def test_empty_rejected(self):
        with pytest.raises(GRatError):
            parse_grat("  ")

    def test_rational(self):
        assert parse_rational("2/3") == Fraction(2, 3)
        with pytest.raises(GRatError):
            parse_rational("1+i")


class TestConversion:
    def test_qq_element(self):
        assert to_fraction(QQ(3, 4)) == Fraction(3, 4)

    def test_conjugate(self):
        assert conjugate_grat(grat(1, -2)) == grat(1, 2)
        assert conjugate_grat(grat(Fraction(3, 4))) == grat(Fraction(3, 4))
        assert conjugate_grat(grat(0, Fraction(-1, 3))) == grat(0, Fraction(1, 3))

    def test_is_real(self):
        assert is_real(grat(7))
        assert not is_real(grat(0, 1))

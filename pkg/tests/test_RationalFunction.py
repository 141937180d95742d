#!/usr/bin/env python3
# tab-width:4

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from diastasistool.GRat import grat
from diastasistool.RationalFunction import RationalFunction
from diastasistool.RationalFunction import RationalFunctionError
from diastasistool.RationalFunction import polynomial_coefficients
from diastasistool.RationalFunction import substitute_line
from diastasistool.RationalFunction import wirtinger_derivative

NAMES = ("z", "zb")


def _z():
    return RationalFunction.variable(NAMES, "z")


def _zb():
    return RationalFunction.variable(NAMES, "zb")


def _x():
    return RationalFunction.variable(("x",), "x")


class TestCanonicalForm:
    def test_common_factor_cancels(self):
        z = _z()
        assert (z * z - 1) / (z - 1) == z + 1

    def test_scaled_denominator(self):
        z = _z()
        assert 1 / (2 * z + 2) == (1 / (z + 1)) * Fraction(1, 2)

    def test_zero_is_falsy(self):
        z = _z()
        assert not (z - z)


class TestCalculus:
    def test_derivative_of_reciprocal(self):
        z = _z()
        assert (1 / z).derivative("z") == -1 / (z * z)

    def test_wirtinger_pairs_conjugate(self):
        f = _z() * _zb() * _zb()
        assert wirtinger_derivative(f, "z", conjugate=True) == 2 * _z() * _zb()

    def test_conjugate_swaps_and_conjugates(self):
        f = RationalFunction.from_coefficients(NAMES, {(1, 0): grat(0, 1)})
        g = RationalFunction.from_coefficients(NAMES, {(0, 1): grat(0, -1)})
        assert f.conjugate() == g


class TestLines:
    def test_unit_direction(self):
        h = 1 / ((1 + _z() * _zb()) ** 2)
        x = _x()
        assert substitute_line(h, {"z": 1}) == 1 / ((1 + x * x) ** 2)

    def test_imaginary_direction(self):
        h = 1 / ((1 - _z() * _zb()) ** 2)
        x = _x()
        assert substitute_line(h, {"z": grat(0, 1)}) == 1 / ((1 - x * x) ** 2)

    def test_coefficients(self):
        x = _x()
        assert polynomial_coefficients((1 + 3 * x * x).numerator) == [1, 0, 3]


class TestErrors:
    def test_pole(self):
        with pytest.raises(RationalFunctionError):
            (1 / _z()).evaluate({"z": 0, "zb": 0})

    def test_unknown_variable(self):
        with pytest.raises(RationalFunctionError):
            _z().derivative("w")

    def test_json(self):
        f = (1 + _z()) / (2 - _zb())
        assert RationalFunction.from_json(f.to_json()) == f


def _sample(seed: int) -> RationalFunction:
    rng = random.Random(seed)

    def poly(terms: int, constant) -> RationalFunction:
        coeffs = {
            (rng.randint(0, 2), rng.randint(0, 2)): grat(rng.randint(-4, 4), rng.randint(-2, 2))
            for _ in range(terms)
        }
        coeffs[(0, 0)] = grat(constant)
        return RationalFunction.from_coefficients(NAMES, coeffs)

    return poly(3, rng.randint(-3, 3)) / poly(2, rng.randint(1, 3))


SEEDS = (2, 5, 11, 42)


class TestLaws:
    @pytest.mark.parametrize("seed", SEEDS)
    def test_wirtinger_derivatives_commute(self, seed):
        f = _sample(seed)
        mixed = wirtinger_derivative(wirtinger_derivative(f, "z"), "z", conjugate=True)
        assert mixed == wirtinger_derivative(wirtinger_derivative(f, "z", conjugate=True), "z")

    @pytest.mark.parametrize("seed", SEEDS)
    def test_conjugate_is_involution(self, seed):
        f = _sample(seed)
        assert f.conjugate().conjugate() == f

    @pytest.mark.parametrize("seed", SEEDS)
    def test_conjugate_is_multiplicative(self, seed):
        f, g = _sample(seed), _sample(seed + 1)
        assert (f * g).conjugate() == f.conjugate() * g.conjugate()

    @pytest.mark.parametrize("seed", SEEDS)
    def test_conjugate_derivative(self, seed):
        f = _sample(seed)
        expected = wirtinger_derivative(f, "z").conjugate()
        assert wirtinger_derivative(f.conjugate(), "z", conjugate=True) == expected

    @pytest.mark.parametrize("seed", SEEDS)
    def test_quotient_rule(self, seed):
        f, g = _sample(seed), _sample(seed + 7)
        if not g:
            pytest.skip("zero divisor")
        expected = (f.derivative("z") * g - f * g.derivative("z")) / (g * g)
        assert (f / g).derivative("z") == expected

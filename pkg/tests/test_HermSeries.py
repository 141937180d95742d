#!/usr/bin/env python3
# tab-width:4

from __future__ import annotations

import random
from fractions import Fraction
from itertools import product

import pytest

from diastasistool.GRat import grat
from diastasistool.HermSeries import HermSeries
from diastasistool.HermSeries import HermSeriesError
from diastasistool.HermSeries import generalized_binomial
from diastasistool.HermSeries import series_exp
from diastasistool.HermSeries import series_log
from diastasistool.HermSeries import series_log_normalized
from diastasistool.HermSeries import series_mul
from diastasistool.HermSeries import series_power
from diastasistool.HermSeries import series_pow_rational
from diastasistool.HermSeries import substitute_negate_bar


class TestConstruction:
    def test_truncates_above_order(self):
        s = HermSeries(1, 2, {((1,), (1,)): 1, ((2,), (1,)): 5})
        assert len(s) == 1

    def test_bad_index_length(self):
        with pytest.raises(HermSeriesError):
            HermSeries(2, 4, {((1,), (1,)): 1})

    def test_embed(self):
        s = HermSeries.abs_squared(1, 4, 0).embed(3, 1)
        assert s.coefficient((0, 1, 0), (0, 1, 0)) == grat(1)


class TestLogExp:
    def test_log_of_disc_norm(self):
        s = series_log(HermSeries.radial((1, -1), 8))
        assert s.coefficient((2,), (2,)) == grat(Fraction(-1, 2))
        assert s.coefficient((4,), (4,)) == grat(Fraction(-1, 4))

    def test_exp_inverts_log(self):
        a = HermSeries.radial((1, 1), 8)
        assert series_exp(series_log(a)) == a

    def test_log_needs_unit_constant(self):
        with pytest.raises(HermSeriesError):
            series_log(HermSeries.radial((2, 1), 4))

    def test_log_normalized_drops_constant(self):
        s = series_log_normalized(HermSeries.radial((2, 2), 6))
        assert s == series_log(HermSeries.radial((1, 1), 6))


class TestPowers:
    def test_square_root_squares_back(self):
        a = HermSeries.radial((1, 1), 8)
        root = series_pow_rational(a, Fraction(1, 2))
        assert series_mul(root, root) == a

    def test_generalized_binomial(self):
        assert generalized_binomial(Fraction(1, 2), 2) == Fraction(-1, 8)
        assert generalized_binomial(Fraction(3), 4) == 0


class TestWirtinger:
    def test_derivative_lowers_order(self):
        s = HermSeries(1, 4, {((2,), (1,)): 1})
        d = s.derivative(0)
        assert d.order == 3
        assert d.coefficient((1,), (1,)) == grat(2)

    def test_conjugate_derivative(self):
        s = HermSeries(1, 4, {((2,), (1,)): 1})
        assert s.derivative(0, conjugate=True).coefficient((2,), (0,)) == grat(1)


class TestSymmetry:
    def test_negate_bar(self):
        s = HermSeries(1, 4, {((1,), (2,)): 3, ((1,), (1,)): 1})
        flipped = substitute_negate_bar(s)
        assert flipped.coefficient((1,), (2,)) == grat(3)
        assert flipped.coefficient((1,), (1,)) == grat(-1)

    def test_hermitian(self):
        assert HermSeries.radial((1, 1), 4).is_hermitian()
        assert not HermSeries(1, 4, {((1,), (0,)): 1}).is_hermitian()

    def test_permute(self):
        s = HermSeries(2, 4, {((1, 0), (1, 0)): 1})
        assert s.permute((1, 0)).coefficient((0, 1), (0, 1)) == grat(1)

    def test_gaussian_hermitian(self):
        s = HermSeries(1, 4, {((1,), (2,)): grat(1, -2), ((2,), (1,)): grat(1, 2)})
        assert s.is_hermitian()
        assert s.conjugate() == s
        assert not HermSeries(1, 4, {((1,), (2,)): grat(1, -2), ((2,), (1,)): grat(1, -2)}).is_hermitian()

    def test_json(self):
        s = HermSeries(1, 4, {((1,), (2,)): grat(1, -2), ((2,), (1,)): grat(1, 2)})
        assert HermSeries.from_json(s.to_json()) == s


def _sample(seed: int, nvars: int = 2, order: int = 5, constant=0, terms: int = 7) -> HermSeries:
    rng = random.Random(seed)
    keys = [
        (left, right)
        for left in product(range(order + 1), repeat=nvars)
        for right in product(range(order + 1), repeat=nvars)
        if 0 < sum(left) + sum(right) <= order
    ]
    coeffs = {
        key: grat(Fraction(rng.randint(-5, 5), rng.randint(1, 4)), Fraction(rng.randint(-3, 3), rng.randint(1, 3)))
        for key in rng.sample(keys, terms)
    }
    origin = (0,) * nvars
    coeffs[(origin, origin)] = constant
    return HermSeries(nvars, order, coeffs)


SEEDS = (1, 7, 23, 101)


class TestRingLaws:
    @pytest.mark.parametrize("seed", SEEDS)
    def test_associative(self, seed):
        a, b, c = (_sample(seed + shift, constant=shift) for shift in range(3))
        assert series_mul(series_mul(a, b), c) == series_mul(a, series_mul(b, c))

    @pytest.mark.parametrize("seed", SEEDS)
    def test_distributive(self, seed):
        a, b, c = (_sample(seed + shift, constant=1 - shift) for shift in range(3))
        assert series_mul(a, b + c) == series_mul(a, b) + series_mul(a, c)

    @pytest.mark.parametrize("seed", SEEDS)
    def test_commutative(self, seed):
        a, b = _sample(seed), _sample(seed + 50, constant=2)
        assert series_mul(a, b) == series_mul(b, a)

    @pytest.mark.parametrize("seed", SEEDS)
    def test_integer_power(self, seed):
        a = _sample(seed, constant=1)
        assert series_power(a, 3) == series_mul(a, series_mul(a, a))


class TestRationalPowerLaws:
    @pytest.mark.parametrize("seed", SEEDS)
    @pytest.mark.parametrize("p,q", [(1, 2), (2, 3), (-1, 3), (3, 4), (-2, 1)])
    def test_power_of_root(self, seed, p, q):
        s = _sample(seed, constant=1, order=4)
        lhs = series_power(series_pow_rational(s, Fraction(p, q)), q)
        assert lhs == series_pow_rational(s, p)

    @pytest.mark.parametrize("seed", SEEDS)
    def test_log_of_product(self, seed):
        a, b = _sample(seed, constant=1), _sample(seed + 9, constant=1)
        assert series_log(series_mul(a, b)) == series_log(a) + series_log(b)

    @pytest.mark.parametrize("seed", SEEDS)
    def test_exp_inverts_log(self, seed):
        a = _sample(seed, constant=1)
        assert series_exp(series_log(a)) == a


class TestSymmetryLaws:
    @pytest.mark.parametrize("seed", SEEDS)
    def test_negate_bar_is_multiplicative(self, seed):
        a, b = _sample(seed, constant=1), _sample(seed + 3, constant=-2)
        expected = series_mul(substitute_negate_bar(a), substitute_negate_bar(b))
        assert substitute_negate_bar(series_mul(a, b)) == expected

    @pytest.mark.parametrize("seed", SEEDS)
    def test_negate_bar_is_involution(self, seed):
        a = _sample(seed)
        assert substitute_negate_bar(substitute_negate_bar(a)) == a

    @pytest.mark.parametrize("seed", SEEDS)
    def test_hermitian_part(self, seed):
        a = _sample(seed)
        assert (a + a.conjugate()).is_hermitian()

    @pytest.mark.parametrize("seed", SEEDS)
    @pytest.mark.parametrize("i,j", [(0, 0), (0, 1), (1, 0), (1, 1)])
    def test_wirtinger_derivatives_commute(self, seed, i, j):
        a = _sample(seed, order=6, terms=12)
        assert a.derivative(i).derivative(j, conjugate=True) == a.derivative(j, conjugate=True).derivative(i)

    @pytest.mark.parametrize("seed", SEEDS)
    def test_holomorphic_derivatives_commute(self, seed):
        a = _sample(seed, order=6, terms=12)
        assert a.derivative(0).derivative(1) == a.derivative(1).derivative(0)

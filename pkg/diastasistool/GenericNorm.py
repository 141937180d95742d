#!/usr/bin/env python3
# tab-width:4

"""
GenericNorm - the generic norm N(z, zbar) of a classical Cartan domain as a
HermSeries, normalized so N(0, 0) = 1.

    rank-1 ball   1 - sum |z_i|^2
    I(p, q)       det(I_p - Z Z*),          Z a p x q matrix of coordinates
    II(m)         det(I_m - Z Z*)^(1/2),    Z skew-symmetric
    III(m)        det(I_m - Z Z*),          Z symmetric
    IV(m)         1 - 2 sum |z_i|^2 + |sum z_i^2|^2

Matrix coordinates are numbered row-major over the free entries (all of Z
for type I, the upper triangle for II and III). A product domain emits
prod N_j^{mu_j}, each factor on its own block of variables.

The exceptional domains have no provider.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations

from asserttool import ic
from globalverbose import gvd
from sympy.combinatorics import Permutation

from .CartanDomain import CartanDomain
from .CartanDomain import DomainError
from .CartanDomain import Family
from .CartanDomain import ProductDomain
from .HermSeries import HermSeries
from .HermSeries import series_mul
from .HermSeries import series_pow_rational
from .HermSeries import unit_index


def permutation_sign(permutation: tuple[int, ...]) -> int:
    return Permutation(list(permutation)).signature()


def series_determinant(matrix: list[list[HermSeries]]) -> HermSeries:
    """Leibniz expansion; the matrices here are at most a handful of rows."""
    size = len(matrix)
    nvars = matrix[0][0].nvars
    order = min(entry.order for row in matrix for entry in row)
    total = HermSeries(nvars, order)
    for permutation in permutations(range(size)):
        term = HermSeries.constant(nvars, order, permutation_sign(permutation))
        for row, column in enumerate(permutation):
            term = series_mul(term, matrix[row][column])
            if not term:
                break
        total = total + term
    return total


def _entry_map(domain: CartanDomain) -> tuple[int, int, dict[tuple[int, int], tuple[int, int]]]:
    """(rows, columns, {(i, j): (slot, sign)}) for the matrix families."""
    entries: dict[tuple[int, int], tuple[int, int]] = {}
    if domain.family is Family.I:
        rows, columns = domain.size
        for i in range(rows):
            for j in range(columns):
                entries[(i, j)] = (i * columns + j, 1)
        return rows, columns, entries
    (m,) = domain.size
    slot = 0
    for i in range(m):
        for j in range(i, m):
            if domain.family is Family.II and i == j:
                continue
            entries[(i, j)] = (slot, 1)
            entries[(j, i)] = (slot, -1 if domain.family is Family.II else 1)
            slot += 1
    return m, m, entries


def _determinant_norm(domain: CartanDomain, order: int) -> HermSeries:
    rows, columns, entries = _entry_map(domain)
    nvars = domain.n
    matrix = []
    for i in range(rows):
        row = []
        for k in range(rows):
            coeffs = {}
            if i == k:
                origin = (0,) * nvars
                coeffs[(origin, origin)] = Fraction(1)
            for j in range(columns):
                if (i, j) not in entries or (k, j) not in entries:
                    continue
                left, left_sign = entries[(i, j)]
                right, right_sign = entries[(k, j)]
                key = (unit_index(nvars, left), unit_index(nvars, right))
                coeffs[key] = coeffs.get(key, Fraction(0)) - left_sign * right_sign
            row.append(HermSeries(nvars, order, coeffs))
        matrix.append(row)
    return series_determinant(matrix)


def _lie_ball_norm(m: int, order: int) -> HermSeries:
    origin = (0,) * m
    coeffs = {(origin, origin): Fraction(1)}
    for i in range(m):
        unit = unit_index(m, i)
        coeffs[(unit, unit)] = Fraction(-2)
    for i in range(m):
        for k in range(m):
            left = tuple(2 if s == i else 0 for s in range(m))
            right = tuple(2 if s == k else 0 for s in range(m))
            coeffs[(left, right)] = coeffs.get((left, right), Fraction(0)) + 1
    return HermSeries(m, order, coeffs)


def _cartan_norm(domain: CartanDomain, order: int) -> HermSeries:
    if domain.family is Family.BALL:
        origin = (0,) * domain.n
        coeffs = {(origin, origin): 1}
        for i in range(domain.n):
            unit = unit_index(domain.n, i)
            coeffs[(unit, unit)] = -1
        return HermSeries(domain.n, order, coeffs)
    if domain.family in (Family.I, Family.III):
        return _determinant_norm(domain, order)
    if domain.family is Family.II:
        return series_pow_rational(_determinant_norm(domain, order), Fraction(1, 2))
    if domain.family is Family.IV:
        return _lie_ball_norm(domain.n, order)
    raise DomainError(f"generic norm: no series provider for {domain.family.value}")


@dataclass(frozen=True)
class GenericNormProvider:
    domain: CartanDomain | ProductDomain

    @property
    def nvars(self) -> int:
        return self.domain.n

    def series(self, order: int) -> HermSeries:
        return generic_norm_series(self, order)


def generic_norm_series(
    p: GenericNormProvider | CartanDomain | ProductDomain,
    order: int,
) -> HermSeries:
    domain = p.domain if isinstance(p, GenericNormProvider) else p
    if isinstance(domain, CartanDomain):
        return _cartan_norm(domain, order)
    nvars = domain.n
    total = HermSeries.constant(nvars, order, 1)
    for factor, mu, offset in zip(domain.factors, domain.exponents, domain.offsets):
        piece = series_pow_rational(_cartan_norm(factor, order), mu)
        total = series_mul(total, piece.embed(nvars, offset))
    if gvd:
        ic(domain.label, len(total))
    return total

#!/usr/bin/env python3
# tab-width:4

"""
RationalFunction - exact multivariate rational functions over the Gaussian
rationals, on top of sympy's sparse PolyElement rings.

Every value is kept in one canonical form:

    1. numerator and denominator share no polynomial factor (gcd-reduced);
    2. the denominator is scaled to a primitive polynomial with integer
       Gaussian coefficients whose graded-lex leading coefficient is a
       positive integer; the numerator absorbs the scale.

Two equal functions are therefore equal term by term, which is what lets a
computed metric be compared with a printed P/Q exactly.

Variables come in formally independent pairs: the conjugate of "z" is "zb".
Wirtinger derivatives are plain partial derivatives in that pairing.
"""

from __future__ import annotations

from collections.abc import Mapping
from collections.abc import Sequence
from fractions import Fraction
from functools import lru_cache
from math import gcd
from math import lcm

from sympy import I
from sympy.polys.domains import QQ
from sympy.polys.domains import QQ_I
from sympy.polys.orderings import grlex
from sympy.polys.rings import ring

from .GRat import GRat
from .GRat import conjugate_grat
from .GRat import format_grat
from .GRat import grat
from .GRat import parse_grat
from .GRat import to_fraction

CONJUGATE_SUFFIX = "b"


class RationalFunctionError(ValueError):
    """
    The expression cannot be formed as an exact rational function.

    Zero denominators, unknown variables and mismatched variable rosters land
    here; callers catch it by name.
    """


@lru_cache(maxsize=None)
def polynomial_ring(names: tuple[str, ...]):
    """The QQ_I graded-lex ring on names; cached so equal rosters share a ring."""
    if not names:
        raise RationalFunctionError("rational function: empty variable roster")
    return ring(list(names), QQ_I, grlex)[0]


def conjugate_name(name: str) -> str:
    return name + CONJUGATE_SUFFIX


def _is_real_poly(poly) -> bool:
    return all(not value.y for value in poly.values())


def _cancel_real(num, den):
    target = num.ring
    real_ring = target.clone(domain=QQ)
    p = real_ring.from_dict({m: c.x for m, c in num.items()})
    q = real_ring.from_dict({m: c.x for m, c in den.items()})
    p, q = p.cancel(q)
    return (
        target.from_dict({m: QQ_I(c) for m, c in p.items()}),
        target.from_dict({m: QQ_I(c) for m, c in q.items()}),
    )


def _cancel_gaussian(num, den):
    target = num.ring
    field = QQ.algebraic_field(I)
    alg_ring = target.clone(domain=field)
    p = alg_ring.from_dict({m: field.from_sympy(QQ_I.to_sympy(c)) for m, c in num.items()})
    q = alg_ring.from_dict({m: field.from_sympy(QQ_I.to_sympy(c)) for m, c in den.items()})
    p, q = p.cancel(q)
    return (
        target.from_dict({m: QQ_I.from_sympy(field.to_sympy(c)) for m, c in p.items()}),
        target.from_dict({m: QQ_I.from_sympy(field.to_sympy(c)) for m, c in q.items()}),
    )


def _canonical(num, den):
    poly_ring = num.ring
    if not den:
        raise RationalFunctionError("rational function: zero denominator")
    if not num:
        return poly_ring.zero, poly_ring.one
    if not den.is_ground:
        if _is_real_poly(num) and _is_real_poly(den):
            num, den = _cancel_real(num, den)
        else:
            num, den = _cancel_gaussian(num, den)
    lead = den.LC
    num = num.quo_ground(lead)
    den = den.quo_ground(lead)
    parts = [to_fraction(part) for value in den.values() for part in (value.x, value.y)]
    common = lcm(*(part.denominator for part in parts))
    content = gcd(*((part * common).numerator for part in parts))
    factor = grat(Fraction(common, content))
    return num.mul_ground(factor), den.mul_ground(factor)


def _evaluate(poly, values: Sequence[GRat]) -> GRat:
    total = grat(0)
    for exponents, coefficient in poly.items():
        term = coefficient
        for value, power in zip(values, exponents):
            if power:
                term = term * value**power
        total = total + term
    return total


class RationalFunction:
    __slots__ = ("numerator", "denominator")

    def __init__(self, numerator, denominator=None):
        if denominator is None:
            denominator = numerator.ring.one
        if numerator.ring != denominator.ring:
            raise RationalFunctionError("rational function: numerator and denominator rings differ")
        self.numerator, self.denominator = _canonical(numerator, denominator)

    @classmethod
    def constant(cls, names: Sequence[str], value) -> RationalFunction:
        poly_ring = polynomial_ring(tuple(names))
        return cls(poly_ring.ground_new(grat(value)))

    @classmethod
    def variable(cls, names: Sequence[str], name: str) -> RationalFunction:
        poly_ring = polynomial_ring(tuple(names))
        return cls(poly_ring.gens[_index(poly_ring, name)])

    @classmethod
    def from_coefficients(
        cls,
        names: Sequence[str],
        numerator: Mapping[tuple[int, ...], object],
        denominator: Mapping[tuple[int, ...], object] | None = None,
    ) -> RationalFunction:
        poly_ring = polynomial_ring(tuple(names))
        num = poly_ring.from_dict({tuple(m): grat(c) for m, c in numerator.items()})
        if denominator is None:
            return cls(num)
        den = poly_ring.from_dict({tuple(m): grat(c) for m, c in denominator.items()})
        return cls(num, den)

    @property
    def ring(self):
        return self.numerator.ring

    @property
    def variables(self) -> tuple[str, ...]:
        return tuple(str(symbol) for symbol in self.ring.symbols)

    def _coerce(self, other) -> RationalFunction:
        if isinstance(other, RationalFunction):
            if other.ring != self.ring:
                raise RationalFunctionError(
                    f"rational function: roster {other.variables} != {self.variables}"
                )
            return other
        return RationalFunction.constant(self.variables, other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return (
            self.ring == other.ring
            and self.numerator == other.numerator
            and self.denominator == other.denominator
        )

    def __hash__(self) -> int:
        return hash((self.variables, frozenset(self.numerator.items()), frozenset(self.denominator.items())))

    def __repr__(self) -> str:
        return f"RationalFunction(({self.numerator}) / ({self.denominator}))"

    def __bool__(self) -> bool:
        return bool(self.numerator)

    def __add__(self, other) -> RationalFunction:
        other = self._coerce(other)
        if self.denominator == other.denominator:
            return RationalFunction(self.numerator + other.numerator, self.denominator)
        return RationalFunction(
            self.numerator * other.denominator + other.numerator * self.denominator,
            self.denominator * other.denominator,
        )

    __radd__ = __add__

    def __neg__(self) -> RationalFunction:
        return RationalFunction(-self.numerator, self.denominator)

    def __sub__(self, other) -> RationalFunction:
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> RationalFunction:
        return self._coerce(other) - self

    def __mul__(self, other) -> RationalFunction:
        other = self._coerce(other)
        return RationalFunction(
            self.numerator * other.numerator,
            self.denominator * other.denominator,
        )

    __rmul__ = __mul__

    def reciprocal(self) -> RationalFunction:
        if not self.numerator:
            raise RationalFunctionError("rational function: reciprocal of zero")
        return RationalFunction(self.denominator, self.numerator)

    def __truediv__(self, other) -> RationalFunction:
        return self * self._coerce(other).reciprocal()

    def __rtruediv__(self, other) -> RationalFunction:
        return self._coerce(other) * self.reciprocal()

    def __pow__(self, exponent: int) -> RationalFunction:
        if exponent < 0:
            return self.reciprocal() ** (-exponent)
        return RationalFunction(self.numerator**exponent, self.denominator**exponent)

    def is_constant(self) -> bool:
        return self.numerator.is_ground and self.denominator.is_ground

    def is_real(self) -> bool:
        return _is_real_poly(self.numerator) and _is_real_poly(self.denominator)

    def degree(self, name: str) -> tuple[int, int]:
        """(numerator degree, denominator degree) in one variable."""
        position = _index(self.ring, name)
        return self.numerator.degree(position), self.denominator.degree(position)

    def evaluate(self, point: Mapping[str, object]) -> GRat:
        values = [grat(point[name]) for name in self.variables]
        denominator = _evaluate(self.denominator, values)
        if not denominator:
            raise RationalFunctionError(f"rational function: pole at {dict(point)}")
        return _evaluate(self.numerator, values) / denominator

    def derivative(self, name: str) -> RationalFunction:
        position = _index(self.ring, name)
        num = self.numerator
        den = self.denominator
        return RationalFunction(
            num.diff(position) * den - num * den.diff(position),
            den * den,
        )

    def conjugate(self) -> RationalFunction:
        """conj(f) with every z swapped for its zb partner."""
        names = self.variables
        swap = []
        for name in names:
            if name.endswith(CONJUGATE_SUFFIX) and name[: -len(CONJUGATE_SUFFIX)] in names:
                swap.append(names.index(name[: -len(CONJUGATE_SUFFIX)]))
            elif conjugate_name(name) in names:
                swap.append(names.index(conjugate_name(name)))
            else:
                swap.append(names.index(name))

        def flip(poly):
            return poly.ring.from_dict(
                {
                    tuple(exponents[swap[k]] for k in range(len(names))): conjugate_grat(value)
                    for exponents, value in poly.items()
                }
            )

        return RationalFunction(flip(self.numerator), flip(self.denominator))

    def to_json(self) -> dict:
        def terms(poly) -> list[dict]:
            return [{"m": list(m), "c": format_grat(c)} for m, c in poly.terms()]

        return {
            "variables": list(self.variables),
            "numerator": terms(self.numerator),
            "denominator": terms(self.denominator),
        }

    @classmethod
    def from_json(cls, data: Mapping) -> RationalFunction:
        try:
            return cls.from_coefficients(
                data["variables"],
                {tuple(t["m"]): parse_grat(t["c"]) for t in data["numerator"]},
                {tuple(t["m"]): parse_grat(t["c"]) for t in data["denominator"]},
            )
        except (KeyError, TypeError) as exc:
            raise RationalFunctionError(f"rational function json: malformed record ({exc})") from exc


def _index(poly_ring, name: str) -> int:
    names = [str(symbol) for symbol in poly_ring.symbols]
    if name not in names:
        raise RationalFunctionError(f"rational function: unknown variable {name!r} in {names}")
    return names.index(name)


def wirtinger_derivative(
    f: RationalFunction,
    var: str,
    conjugate: bool = False,
) -> RationalFunction:
    """d/dz or d/dzbar, z and zbar treated as independent."""
    name = conjugate_name(var) if conjugate else var
    return f.derivative(name)


def substitute_line(
    f: RationalFunction,
    directions: Mapping[str, object],
    target: str = "x",
) -> RationalFunction:
    """
    Restrict to the complex line z = lambda x, zbar = conj(lambda) x for every
    paired variable z in directions; x is real so both become multiples of x.
    """
    names = f.variables
    scalars = []
    for name in names:
        if name in directions:
            scalars.append(grat(directions[name]))
        elif name.endswith(CONJUGATE_SUFFIX) and name[: -len(CONJUGATE_SUFFIX)] in directions:
            scalars.append(conjugate_grat(grat(directions[name[: -len(CONJUGATE_SUFFIX)]])))
        else:
            raise RationalFunctionError(f"rational function: no direction for {name!r}")
    line_ring = polynomial_ring((target,))

    def restrict(poly):
        out: dict[tuple[int], GRat] = {}
        for exponents, value in poly.items():
            term = value
            for scalar, power in zip(scalars, exponents):
                if power:
                    term = term * scalar**power
            key = (sum(exponents),)
            out[key] = out.get(key, grat(0)) + term
        return line_ring.from_dict({k: v for k, v in out.items() if v})

    denominator = restrict(f.denominator)
    if not denominator:
        raise RationalFunctionError("rational function: line lies in the polar set")
    return RationalFunction(restrict(f.numerator), denominator)


def polynomial_coefficients(poly) -> list[Fraction]:
    """Dense ascending coefficient list of a univariate real polynomial."""
    if poly.ring.ngens != 1:
        raise RationalFunctionError("rational function: expected a univariate polynomial")
    top = poly.degree(0) if poly else 0
    coefficients = [Fraction(0)] * (top + 1)
    for (power,), value in poly.items():
        if value.y:
            raise RationalFunctionError("rational function: coefficient is not real")
        coefficients[power] = to_fraction(value.x)
    return coefficients


#!/usr/bin/env python3
# tab-width:4

"""
HermSeries - truncated power series  sum a_IJ z^I zbar^J  in n complex
variables, with exact Gaussian-rational coefficients.

z and zbar are formally independent: a key (I, J) is a pair of exponent
tuples, and only keys with |I| + |J| <= order are stored. Total-degree
truncation is closed under every operation here, so a product, exponential
or logarithm of series known through order H is itself exact through H.
Nothing beyond the stored order is ever guessed.

Storage is sparse. Potentials of circle-invariant metrics only populate
|I| = |J|, and the block-structured ones are sparser still.

Products, powers, exp and log lift a series to QQ_I[t, z, zb] with t counting
total degree and hand it to sympy.polys.ring_series, truncating in t.
"""

from __future__ import annotations

from collections.abc import Iterable
from collections.abc import Iterator
from collections.abc import Mapping
from fractions import Fraction
from functools import lru_cache

from sympy import Rational
from sympy import binomial
from sympy.polys.domains import QQ_I
from sympy.polys.ring_series import rs_exp
from sympy.polys.ring_series import rs_log
from sympy.polys.ring_series import rs_mul
from sympy.polys.ring_series import rs_pow
from sympy.polys.rings import ring

from .GRat import ONE
from .GRat import ZERO
from .GRat import GRat
from .GRat import conjugate_grat
from .GRat import format_grat
from .GRat import grat
from .GRat import parse_grat
from .GRat import real_part
from .GRat import to_fraction

MultiIndex = tuple[int, ...]
Key = tuple[MultiIndex, MultiIndex]

DEFAULT_ORDER = 10      # truncation total degree when a caller gives none


class HermSeriesError(ValueError):
    """
    The series cannot support the requested operation.

    Raised for variable-count mismatches and for exp/log/pow called on a
    series whose constant term makes the truncated expansion inexact.
    """


def _add_index(a: MultiIndex, b: MultiIndex) -> MultiIndex:
    return tuple(x + y for x, y in zip(a, b))


def zero_index(nvars: int) -> MultiIndex:
    return (0,) * nvars


def unit_index(nvars: int, position: int) -> MultiIndex:
    return tuple(1 if slot == position else 0 for slot in range(nvars))


class HermSeries:
    __slots__ = ("nvars", "order", "_coeffs", "_sorted")

    def __init__(
        self,
        nvars: int,
        order: int,
        coeffs: Mapping[Key, object] | None = None,
    ):
        if nvars < 1:
            raise HermSeriesError(f"series: nvars must be positive, got {nvars}")
        if order < 0:
            raise HermSeriesError(f"series: order must be >= 0, got {order}")
        cleaned: dict[Key, GRat] = {}
        for (left, right), value in (coeffs or {}).items():
            left = tuple(int(e) for e in left)
            right = tuple(int(e) for e in right)
            if len(left) != nvars or len(right) != nvars:
                raise HermSeriesError(
                    f"series: multi-index length {len(left)}/{len(right)} for {nvars} variables"
                )
            if min(left + right, default=0) < 0:
                raise HermSeriesError(f"series: negative exponent in {(left, right)}")
            if sum(left) + sum(right) > order:
                continue
            value = grat(value)
            if value:
                cleaned[(left, right)] = value
        self.nvars = nvars
        self.order = order
        self._coeffs = cleaned
        self._sorted = None

    @classmethod
    def _raw(
        cls,
        nvars: int,
        order: int,
        coeffs: dict[Key, GRat],
    ) -> HermSeries:
        series = cls.__new__(cls)
        series.nvars = nvars
        series.order = order
        series._coeffs = coeffs
        series._sorted = None
        return series

    @classmethod
    def constant(cls, nvars: int, order: int, value=1) -> HermSeries:
        value = grat(value)
        origin = zero_index(nvars)
        return cls._raw(nvars, order, {(origin, origin): value} if value else {})

    @classmethod
    def monomial(
        cls,
        nvars: int,
        order: int,
        left: MultiIndex,
        right: MultiIndex,
        value=1,
    ) -> HermSeries:
        return cls(nvars, order, {(tuple(left), tuple(right)): value})

    @classmethod
    def abs_squared(cls, nvars: int, order: int, position: int) -> HermSeries:
        """|z_position|^2."""
        unit = unit_index(nvars, position)
        return cls(nvars, order, {(unit, unit): 1})

    @classmethod
    def radial(cls, coefficients: Iterable, order: int) -> HermSeries:
        """One variable, sum c_k |z|^(2k)."""
        coeffs = {}
        for k, value in enumerate(coefficients):
            coeffs[((k,), (k,))] = value
        return cls(1, order, coeffs)

    def __len__(self) -> int:
        return len(self._coeffs)

    def __bool__(self) -> bool:
        return bool(self._coeffs)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, HermSeries):
            return NotImplemented
        return (
            self.nvars == other.nvars
            and self.order == other.order
            and self._coeffs == other._coeffs
        )

    def __hash__(self) -> int:
        return hash((self.nvars, self.order, frozenset(self._coeffs.items())))

    def __repr__(self) -> str:
        shown = ", ".join(
            f"{list(left)}{list(right)}: {format_grat(value)}"
            for (left, right), value in self.items()[:6]
        )
        more = "" if len(self) <= 6 else f", ... ({len(self)} terms)"
        return f"HermSeries(nvars={self.nvars}, order={self.order}, {{{shown}{more}}})"

    def _by_degree(self) -> list[tuple[int, MultiIndex, MultiIndex, GRat]]:
        if self._sorted is None:
            self._sorted = sorted(
                (sum(left) + sum(right), left, right, value)
                for (left, right), value in self._coeffs.items()
            )
        return self._sorted

    def items(self) -> list[tuple[Key, GRat]]:
        """Deterministic order: total degree, then I, then J."""
        return [((left, right), value) for _, left, right, value in self._by_degree()]

    def keys(self) -> Iterator[Key]:
        return (key for key, _ in self.items())

    def coefficient(self, left: MultiIndex, right: MultiIndex) -> GRat:
        return self._coeffs.get((tuple(left), tuple(right)), ZERO)

    def constant_term(self) -> GRat:
        origin = zero_index(self.nvars)
        return self._coeffs.get((origin, origin), ZERO)

    def min_degree(self) -> int | None:
        terms = self._by_degree()
        if not terms:
            return None
        return terms[0][0]

    def degree(self) -> int | None:
        terms = self._by_degree()
        if not terms:
            return None
        return terms[-1][0]

    def _check_partner(self, other: HermSeries, name: str) -> None:
        if self.nvars != other.nvars:
            raise HermSeriesError(
                f"series {name}: variable count mismatch {self.nvars} != {other.nvars}"
            )

    def __add__(self, other) -> HermSeries:
        if not isinstance(other, HermSeries):
            other = HermSeries.constant(self.nvars, self.order, other)
        self._check_partner(other, "add")
        order = min(self.order, other.order)
        out = {k: v for k, v in self._coeffs.items() if sum(k[0]) + sum(k[1]) <= order}
        for key, value in other._coeffs.items():
            if sum(key[0]) + sum(key[1]) > order:
                continue
            total = out.get(key, ZERO) + value
            if total:
                out[key] = total
            else:
                out.pop(key, None)
        return HermSeries._raw(self.nvars, order, out)

    __radd__ = __add__

    def __neg__(self) -> HermSeries:
        return HermSeries._raw(self.nvars, self.order, {k: -v for k, v in self._coeffs.items()})

    def __sub__(self, other) -> HermSeries:
        if not isinstance(other, HermSeries):
            other = HermSeries.constant(self.nvars, self.order, other)
        return self + (-other)

    def __rsub__(self, other) -> HermSeries:
        return (-self) + other

    def __mul__(self, other) -> HermSeries:
        if isinstance(other, HermSeries):
            return series_mul(self, other)
        return self.scale(other)

    __rmul__ = __mul__

    def scale(self, factor) -> HermSeries:
        factor = grat(factor)
        if not factor:
            return HermSeries._raw(self.nvars, self.order, {})
        return HermSeries._raw(
            self.nvars, self.order, {k: v * factor for k, v in self._coeffs.items()}
        )

    def truncate(self, order: int) -> HermSeries:
        order = min(order, self.order)
        return HermSeries._raw(
            self.nvars,
            order,
            {k: v for k, v in self._coeffs.items() if sum(k[0]) + sum(k[1]) <= order},
        )

    def conjugate(self) -> HermSeries:
        """Series of conj(f): a_IJ -> conj(a_JI)."""
        return HermSeries._raw(
            self.nvars,
            self.order,
            {(right, left): conjugate_grat(value) for (left, right), value in self._coeffs.items()},
        )

    def is_hermitian(self) -> bool:
        """True when the series is real-valued, a_JI = conj(a_IJ)."""
        for (left, right), value in self._coeffs.items():
            if self._coeffs.get((right, left), ZERO) != conjugate_grat(value):
                return False
        return True

    def graded_part(self, holomorphic: int, antiholomorphic: int) -> HermSeries:
        return HermSeries._raw(
            self.nvars,
            self.order,
            {
                k: v
                for k, v in self._coeffs.items()
                if sum(k[0]) == holomorphic and sum(k[1]) == antiholomorphic
            },
        )

    def embed(self, nvars: int, offset: int) -> HermSeries:
        """Same series with its variables moved to slots offset.. of nvars."""
        if offset < 0 or offset + self.nvars > nvars:
            raise HermSeriesError(
                f"series embed: {self.nvars} variables do not fit at {offset} in {nvars}"
            )
        head = (0,) * offset
        tail = (0,) * (nvars - offset - self.nvars)
        return HermSeries._raw(
            nvars,
            self.order,
            {
                (head + left + tail, head + right + tail): value
                for (left, right), value in self._coeffs.items()
            },
        )

    def permute(self, permutation: tuple[int, ...]) -> HermSeries:
        """Variable slot k of the result is slot permutation[k] of self."""
        if sorted(permutation) != list(range(self.nvars)):
            raise HermSeriesError(f"series permute: {permutation} is not a permutation")

        def move(index: MultiIndex) -> MultiIndex:
            return tuple(index[source] for source in permutation)

        return HermSeries._raw(
            self.nvars,
            self.order,
            {(move(left), move(right)): value for (left, right), value in self._coeffs.items()},
        )

    def derivative(self, position: int, conjugate: bool = False) -> HermSeries:
        """d/dz_position, or d/dzbar_position; the order drops by one."""
        if not 0 <= position < self.nvars:
            raise HermSeriesError(f"series derivative: no variable {position}")
        if self.order == 0:
            return HermSeries._raw(self.nvars, 0, {})
        out = {}
        for (left, right), value in self._coeffs.items():
            index = right if conjugate else left
            power = index[position]
            if not power:
                continue
            lowered = index[:position] + (power - 1,) + index[position + 1:]
            key = (left, lowered) if conjugate else (lowered, right)
            out[key] = value * grat(power)
        return HermSeries._raw(self.nvars, self.order - 1, out)

    def restrict_origin(self, positions: Iterable[int]) -> HermSeries:
        """Set the listed variables (and their conjugates) to zero."""
        dropped = set(positions)
        return HermSeries._raw(
            self.nvars,
            self.order,
            {
                (left, right): value
                for (left, right), value in self._coeffs.items()
                if not any(left[p] or right[p] for p in dropped)
            },
        )

    def to_json(self) -> dict:
        return {
            "nvars": self.nvars,
            "order": self.order,
            "coefficients": [
                {"I": list(left), "J": list(right), "c": format_grat(value)}
                for (left, right), value in self.items()
            ],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> HermSeries:
        try:
            coeffs = {
                (tuple(entry["I"]), tuple(entry["J"])): parse_grat(entry["c"])
                for entry in data["coefficients"]
            }
            return cls(int(data["nvars"]), int(data["order"]), coeffs)
        except (KeyError, TypeError) as exc:
            raise HermSeriesError(f"series json: malformed record ({exc})") from exc


@lru_cache(maxsize=None)
def _graded_ring(nvars: int):
    """QQ_I[t, z_1..z_n, zb_1..zb_n]; t carries the total degree of each term."""
    names = ["t"] + [f"z{k}" for k in range(nvars)] + [f"zb{k}" for k in range(nvars)]
    graded, grading, *_ = ring(",".join(names), QQ_I)
    return graded, grading


def _to_graded(a: HermSeries):
    graded, _ = _graded_ring(a.nvars)
    return graded.from_dict(
        {
            (sum(left) + sum(right),) + left + right: value
            for (left, right), value in a._coeffs.items()
        }
    )


def _from_graded(poly, nvars: int, order: int) -> HermSeries:
    coeffs = {}
    for exponents, value in poly.items():
        if exponents[0] > order or not value:
            continue
        coeffs[(tuple(exponents[1 : nvars + 1]), tuple(exponents[nvars + 1 :]))] = value
    return HermSeries._raw(nvars, order, coeffs)


def series_mul(a: HermSeries, b: HermSeries) -> HermSeries:
    """Cauchy product truncated at min(a.order, b.order)."""
    a._check_partner(b, "mul")
    order = min(a.order, b.order)
    _, grading = _graded_ring(a.nvars)
    product = rs_mul(_to_graded(a), _to_graded(b), grading, order + 1)
    return _from_graded(product, a.nvars, order)


def series_power(a: HermSeries, exponent: int) -> HermSeries:
    if exponent < 0:
        raise HermSeriesError(f"series power: negative exponent {exponent}, use series_pow_rational")
    if exponent == 0:
        return HermSeries.constant(a.nvars, a.order, 1)
    _, grading = _graded_ring(a.nvars)
    return _from_graded(rs_pow(_to_graded(a), exponent, grading, a.order + 1), a.nvars, a.order)


def series_exp(a: HermSeries) -> HermSeries:
    if a.constant_term():
        raise HermSeriesError(
            f"series exp: constant term {format_grat(a.constant_term())} must be 0"
        )
    if not a:
        return HermSeries.constant(a.nvars, a.order, 1)
    _, grading = _graded_ring(a.nvars)
    return _from_graded(rs_exp(_to_graded(a), grading, a.order + 1), a.nvars, a.order)


def series_log(a: HermSeries) -> HermSeries:
    if a.constant_term() != ONE:
        raise HermSeriesError(
            f"series log: constant term {format_grat(a.constant_term())} must be 1"
        )
    if a.order == 0:
        return HermSeries._raw(a.nvars, 0, {})
    _, grading = _graded_ring(a.nvars)
    return _from_graded(rs_log(_to_graded(a), grading, a.order + 1), a.nvars, a.order)


def series_log_normalized(a: HermSeries) -> HermSeries:
    """log(a / a(0)): the constant log a(0) is pluriharmonic and dropped."""
    constant = a.constant_term()
    if constant.y or real_part(constant) <= 0:
        raise HermSeriesError(
            f"series log: constant term {format_grat(constant)} is not a positive rational"
        )
    return series_log(a.scale(1 / to_fraction(constant.x)))


def generalized_binomial(q: Fraction, k: int) -> Fraction:
    q = to_fraction(q)
    return to_fraction(binomial(Rational(q.numerator, q.denominator), k))


def series_pow_rational(a: HermSeries, q) -> HermSeries:
    """a^q = exp(q log a) for every rational q; needs a(0) = 1."""
    if a.constant_term() != ONE:
        raise HermSeriesError(
            f"series pow: constant term {format_grat(a.constant_term())} must be 1"
        )
    q = to_fraction(q)
    if not q or a == HermSeries.constant(a.nvars, a.order, 1):
        return HermSeries.constant(a.nvars, a.order, 1)
    _, grading = _graded_ring(a.nvars)
    exponent = rs_log(_to_graded(a), grading, a.order + 1) * grat(q)
    return _from_graded(rs_exp(exponent, grading, a.order + 1), a.nvars, a.order)


def substitute_negate_bar(a: HermSeries) -> HermSeries:
    """The series of a(z, -zbar): a_IJ -> (-1)^|J| a_IJ."""
    return HermSeries._raw(
        a.nvars,
        a.order,
        {k: (-v if sum(k[1]) % 2 else v) for k, v in a._coeffs.items()},
    )


def series_from_polynomial(poly, nvars: int, order: int) -> HermSeries:
    """
    A sympy PolyElement over gens (z_1..z_n, zb_1..zb_n) as a series in n
    variables. Coefficients may live in QQ or QQ_I.
    """
    if poly.ring.ngens != 2 * nvars:
        raise HermSeriesError(
            f"series from polynomial: ring has {poly.ring.ngens} gens, expected {2 * nvars}"
        )
    coeffs = {}
    for exponents, value in poly.terms():
        if sum(exponents) > order:
            continue
        key = (tuple(exponents[:nvars]), tuple(exponents[nvars:]))
        coeffs[key] = value if isinstance(value, GRat) else grat(to_fraction(value))
    return HermSeries(nvars, order, coeffs)

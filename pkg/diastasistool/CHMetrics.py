#!/usr/bin/env python3
# tab-width:4

"""
CHMetrics - potentials of the Cartan-Hartogs metrics on
M = {(z, w) : |w|^2 < N(z, zbar)^mu}  and of their duals, as diastases in
n + 1 variables with the fiber coordinate w in the last slot.

    g           -log(N^mu - |w|^2)
    ghat        -log(N^mu (N^mu - |w|^2))       = g + mu (-log N)
    g_star       log(N*^mu + |w|^2)             N*(z, zbar) = N(z, -zbar)
    ghat_star    log(N*^mu (N*^mu + |w|^2))

For a product base N^mu means prod N_j^{mu_j}.

The checks here test the structure these metrics are known to have: the
block-diagonal Calabi matrix of g and ghat, the fiber derivative formula,
ghat splitting as g plus the base metric, and for the disc the Veronese
compactification of ghat_star.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import comb
from math import factorial

from asserttool import ic
from globalverbose import gvd

from .CalabiAnalysis import Diastasis
from .CalabiAnalysis import calabi_matrix
from .CalabiAnalysis import normalize_diastasis
from .CartanDomain import CartanDomain
from .CartanDomain import DomainError
from .CartanDomain import Family
from .CartanDomain import ProductDomain
from .CartanDomain import structural_constants
from .GenericNorm import generic_norm_series
from .GRat import format_grat
from .GRat import grat
from .GRat import to_fraction
from .HermSeries import DEFAULT_ORDER
from .HermSeries import HermSeries
from .HermSeries import series_log
from .HermSeries import series_mul
from .HermSeries import series_pow_rational
from .HermSeries import substitute_negate_bar


class CHMetricError(ValueError):
    """
    A Cartan-Hartogs potential or identity cannot be produced or failed.

    Raised for unsupported bases, bad exponents, and for an identity check
    that does not hold coefficient for coefficient.
    """


class PotentialKind(Enum):
    G = "g"
    GHAT = "ghat"
    G_STAR = "g_star"
    GHAT_STAR = "ghat_star"

    @property
    def is_dual(self) -> bool:
        return self in (PotentialKind.G_STAR, PotentialKind.GHAT_STAR)

    @property
    def is_modified(self) -> bool:
        return self in (PotentialKind.GHAT, PotentialKind.GHAT_STAR)


@dataclass(frozen=True)
class CHDomain:
    base: CartanDomain | ProductDomain
    mu: Fraction | tuple[Fraction, ...]

    def __post_init__(self):
        if isinstance(self.base, ProductDomain):
            mu = tuple(to_fraction(m) for m in self.mu) if isinstance(self.mu, tuple) else None
            if mu is not None and mu != self.base.exponents:
                raise CHMetricError(
                    f"ch domain: mu {mu} disagrees with product exponents {self.base.exponents}"
                )
            object.__setattr__(self, "mu", self.base.exponents)
        else:
            if isinstance(self.mu, tuple):
                raise CHMetricError("ch domain: a vector mu needs a product base")
            object.__setattr__(self, "mu", to_fraction(self.mu))
            if self.mu <= 0:
                raise CHMetricError(f"ch domain: mu must be positive, got {self.mu}")

    @classmethod
    def over(
        cls,
        base: CartanDomain | ProductDomain,
        mu=None,
    ) -> CHDomain:
        if isinstance(base, ProductDomain):
            return cls(base, base.exponents)
        if mu is None:
            raise CHMetricError("ch domain: mu is required for an irreducible base")
        return cls(base, to_fraction(mu))

    @property
    def n(self) -> int:
        return self.base.n

    @property
    def nvars(self) -> int:
        return self.base.n + 1

    @property
    def fiber(self) -> int:
        return self.base.n

    @property
    def mu_vector(self) -> tuple[Fraction, ...]:
        return self.mu if isinstance(self.mu, tuple) else (self.mu,)

    @property
    def label(self) -> str:
        if isinstance(self.base, ProductDomain):
            return self.base.label
        return f"{self.base.label}:mu={self.mu}"


@dataclass(frozen=True)
class CHPotential:
    domain: CHDomain
    kind: PotentialKind
    diastasis: Diastasis

    @property
    def series(self) -> HermSeries:
        return self.diastasis.series


def norm_power_series(d: CHDomain, order: int) -> HermSeries:
    """N^mu over the base variables."""
    try:
        if isinstance(d.base, ProductDomain):
            return generic_norm_series(d.base, order)
        return series_pow_rational(generic_norm_series(d.base, order), d.mu)
    except DomainError as exc:
        raise CHMetricError(f"ch potential: {exc}") from exc


def _fiber_square(d: CHDomain, order: int) -> HermSeries:
    return HermSeries.abs_squared(d.nvars, order, d.fiber)


def ch_potential(
    d: CHDomain,
    kind: PotentialKind | str,
    order: int = DEFAULT_ORDER,
) -> CHPotential:
    kind = PotentialKind(kind) if not isinstance(kind, PotentialKind) else kind
    norm = norm_power_series(d, order).embed(d.nvars, 0)
    if kind.is_dual:
        norm = substitute_negate_bar(norm)
        inner = norm + _fiber_square(d, order)
    else:
        inner = norm - _fiber_square(d, order)
    if kind.is_modified:
        inner = series_mul(norm, inner)
    potential = series_log(inner)
    if not kind.is_dual:
        potential = -potential
    if gvd:
        ic(d.label, kind.value, len(potential))
    return CHPotential(domain=d, kind=kind, diastasis=normalize_diastasis(potential))


def base_potential(d: CHDomain, order: int) -> HermSeries:
    """mu (-log N) on the base, embedded in n + 1 variables."""
    return (-series_log(norm_power_series(d, order))).embed(d.nvars, 0)


def rising_factorial(alpha: Fraction, s: int) -> Fraction:
    value = Fraction(1)
    for step in range(s):
        value *= alpha + step
    return value


@dataclass(frozen=True)
class BlockReport:
    kind: PotentialKind
    order: int
    alpha: Fraction
    blocks: dict[tuple[int, int], tuple[tuple[str, ...], ...]]     # (|m|_n, m_{n+1}) -> F block
    fiber_coefficients: tuple[Fraction, ...]                         # F_{z(0), w(s)}, s = 1..order

    def as_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "order": self.order,
            "alpha": str(self.alpha),
            "cross_blocks_zero": True,
            "fiber_coefficients": [str(c) for c in self.fiber_coefficients],
            "blocks": {f"z({i}),w({s})": [list(row) for row in block] for (i, s), block in self.blocks.items()},
        }


def verify_block_structure(
    p: CHPotential,
    order: int,
    alpha=1,
) -> BlockReport:
    """B_jk vanishes between different (base norm, fiber degree) blocks."""
    if p.kind not in (PotentialKind.G, PotentialKind.GHAT):
        raise CHMetricError(f"block structure: kind {p.kind.value} is not g or ghat")
    alpha = to_fraction(alpha)
    matrix = calabi_matrix(p.diastasis.scale(alpha), order, fiber=p.domain.fiber)
    cross = matrix.cross_block_entries()
    if cross:
        i, j, value = cross[0]
        raise CHMetricError(
            f"block structure: B[{list(matrix.basis[i])}][{list(matrix.basis[j])}] = "
            f"{format_grat(value)} joins blocks {matrix.block_of(i)} and {matrix.block_of(j)}"
        )
    blocks = {
        key: tuple(tuple(format_grat(v) for v in row) for row in matrix.submatrix(indices))
        for key, indices in matrix.fiber_blocks.items()
    }
    fiber_coefficients = []
    for s in range(1, order + 1):
        (index,) = matrix.fiber_blocks[(0, s)]
        value = matrix.entries[index][index]
        expected = rising_factorial(alpha, s) / factorial(s)
        if value != grat(expected):
            raise CHMetricError(
                f"block structure: F_z(0),w({s}) = {format_grat(value)}, "
                f"(1-|w|^2)^-alpha gives {expected}"
            )
        fiber_coefficients.append(expected)
    return BlockReport(
        kind=p.kind,
        order=order,
        alpha=alpha,
        blocks=blocks,
        fiber_coefficients=tuple(fiber_coefficients),
    )


def _fiber_slice(series: HermSeries, fiber: int, s: int, order: int) -> HermSeries:
    """Coefficient of w^s wbar^s as a series in the base variables."""
    coeffs = {}
    for (left, right), value in series.items():
        if left[fiber] != s or right[fiber] != s:
            continue
        key = (left[:fiber] + left[fiber + 1:], right[:fiber] + right[fiber + 1:])
        coeffs[key] = value
    return HermSeries(series.nvars - 1, order, coeffs)


@dataclass(frozen=True)
class FiberIdentityReport:
    alpha: Fraction
    s: int
    factor: Fraction        # s! alpha (alpha + 1) ... (alpha + s - 1)
    order: int


def fiber_derivative_identity(
    alpha,
    s: int,
    d: CHDomain | None = None,
    order: int = 6,
) -> FiberIdentityReport:
    """
    d^{2s}/dw^s dwbar^s at w = 0 of N^{-alpha mu} (N^mu - |w|^2)^{-alpha}
    equals  N^{-alpha mu} s! alpha (alpha+1)...(alpha+s-1) (N^mu)^{-alpha-s}.
    """
    if s < 0:
        raise CHMetricError(f"fiber identity: s must be >= 0, got {s}")
    alpha = to_fraction(alpha)
    if d is None:
        d = CHDomain(structural_constants(Family.BALL, 1), Fraction(1))
    wide = order + 2 * s
    norm = norm_power_series(d, wide)
    embedded = norm.embed(d.nvars, 0)
    function = series_mul(
        series_pow_rational(embedded, -alpha),
        series_pow_rational(embedded - _fiber_square(d, wide), -alpha),
    )
    left = _fiber_slice(function, d.fiber, s, order).scale(factorial(s) ** 2)
    factor = factorial(s) * rising_factorial(alpha, s)
    right = series_pow_rational(norm.truncate(order), -2 * alpha - s).scale(factor)
    if left != right:
        raise CHMetricError(f"fiber identity: mismatch at alpha={alpha}, s={s}")
    return FiberIdentityReport(alpha=alpha, s=s, factor=factor, order=order)


def hessian(series: HermSeries) -> list[list[HermSeries]]:
    """g_{a bbar} = d^2 phi / dz_a dzbar_b, each entry through order - 2."""
    return [
        [series.derivative(a).derivative(b, conjugate=True) for b in range(series.nvars)]
        for a in range(series.nvars)
    ]


@dataclass(frozen=True)
class MetricSumReport:
    order: int
    fiber_fiber_equal: bool
    mixed_equal: bool
    base_equal: bool


def metric_sum_identity(d: CHDomain, order: int) -> MetricSumReport:
    """The Hessian of ghat equals the Hessian of g plus mu g_Omega on the base."""
    modified = hessian(ch_potential(d, PotentialKind.GHAT, order).series)
    plain = hessian(ch_potential(d, PotentialKind.G, order).series)
    base = hessian(base_potential(d, order))
    w = d.fiber
    fiber_fiber = modified[w][w] == plain[w][w] and not base[w][w]
    mixed = all(
        modified[a][w] == plain[a][w] and modified[w][a] == plain[w][a]
        for a in range(d.n)
    )
    base_part = all(
        modified[a][b] == plain[a][b] + base[a][b]
        for a in range(d.n)
        for b in range(d.n)
    )
    if not (fiber_fiber and mixed and base_part):
        raise CHMetricError(
            f"metric sum: ghat != g + mu g_Omega (fiber {fiber_fiber}, mixed {mixed}, base {base_part})"
        )
    return MetricSumReport(order=order, fiber_fiber_equal=True, mixed_equal=True, base_equal=True)


@dataclass(frozen=True)
class CompactificationReport:
    mu: int
    order: int
    veronese_weights: tuple[int, ...]      # |F_k|^2 / |z|^{2k}, C(mu, k) by default

    def as_dict(self) -> dict:
        return {
            "mu": self.mu,
            "order": self.order,
            "veronese_weights": list(self.veronese_weights),
            "norm_identity": True,
            "potential_identity": True,
        }


def veronese_norm(weights: Sequence[int], order: int) -> HermSeries:
    """||F||^2 for F_k = sqrt(w_k) z^k, summed as w_k z^k conj(z^k)."""
    total = HermSeries(1, order)
    for k, weight in enumerate(weights):
        component = HermSeries.monomial(1, order, (k,), (0,))
        total = total + series_mul(component, component.conjugate()).scale(weight)
    return total


def rank1_compactification_check(
    mu: int,
    order: int = 8,
    weights: Sequence[int] | None = None,
) -> CompactificationReport:
    """
    For the disc, F = (sqrt C(mu,k) z^k)_k gives ||F||^2 / |F_0|^2 = (1 + |z|^2)^mu
    = N^mu(z, -zbar), and pulling back through (z, w) -> (F(z), [1, w]) gives
    log(||F||^2/|F_0|^2 + |w|^2) + log(||F||^2/|F_0|^2), the ghat_star potential.

    Other weights can be passed in; they are checked the same way.
    """
    if int(mu) != mu or mu < 1:
        raise CHMetricError(f"compactification: mu must be a positive integer, got {mu}")
    mu = int(mu)
    if weights is None:
        weights = tuple(comb(mu, k) for k in range(mu + 1))
    weights = tuple(int(weight) for weight in weights)
    if not weights or weights[0] != 1:
        raise CHMetricError(f"compactification: F_0 must have weight 1, got {weights}")
    norm = veronese_norm(weights, order)
    disc = CHDomain(structural_constants(Family.BALL, 1), Fraction(mu))
    dual_norm = substitute_negate_bar(norm_power_series(disc, order))
    if norm != dual_norm:
        raise CHMetricError(
            f"compactification: ||F||^2/|F_0|^2 != (1+|z|^2)^{mu} for weights {list(weights)}"
        )
    embedded = norm.embed(2, 0)
    pulled_back = series_log(series_mul(embedded, embedded + HermSeries.abs_squared(2, order, 1)))
    expected = ch_potential(disc, PotentialKind.GHAT_STAR, order).series
    if normalize_diastasis(pulled_back).series != expected:
        raise CHMetricError(f"compactification: pulled-back potential differs from ghat_star, mu={mu}")
    if gvd:
        ic(mu, weights, len(norm))
    return CompactificationReport(mu=mu, order=order, veronese_weights=weights)

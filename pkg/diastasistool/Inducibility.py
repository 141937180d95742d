#!/usr/bin/env python3
# tab-width:4

"""
Inducibility - closed-form decisions for projective inducibility of the
Cartan-Hartogs metrics, the Kaehler-Einstein and extremal conditions, and
the one-variable expansions whose negative coefficients refute the duals.

    alpha g      induced  iff  (alpha + s) mu   in W \\ {0}  for all s >= 0
    alpha ghat   induced  iff  (2 alpha + s) mu in W \\ {0}  for all s >= 0
    alpha g*, alpha ghat*  finitely induced  iff  alpha, mu_j positive integers

A Wallach decision never enumerates the monotone tail: once (shift + s) mu
passes (r - 1) a / 2 every later value is in the continuous part.

The refutations of the duals go through the expansions
    Psi(x)  = ((1 + x)^(a/b) + 1)^(bk)                    (g*)
    Phi(x)  = ((1 + x)^(a/2b) + 1)^(bk) (1 + x)^(ak/2)     (ghat*)
which are computed twice, as truncated series and as binomial sums, and
must agree exactly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import ceil
from math import comb
from math import factorial
from math import floor
from math import gcd

from asserttool import ic
from globalverbose import gvd
from sympy import Rational
from sympy.polys.domains import QQ
from sympy.polys.orderings import lex
from sympy.polys.ring_series import rs_diff
from sympy.polys.ring_series import rs_exp
from sympy.polys.ring_series import rs_log
from sympy.polys.ring_series import rs_mul
from sympy.polys.ring_series import rs_pow
from sympy.polys.ring_series import rs_series_inversion
from sympy.polys.rings import ring

from .CalabiAnalysis import ProjectiveVerdict
from .CalabiAnalysis import projective_witness
from .CartanDomain import CartanDomain
from .CartanDomain import ProductDomain
from .CartanDomain import wallach_member
from .CHMetrics import CHDomain
from .CHMetrics import PotentialKind
from .CHMetrics import ch_potential
from .GRat import to_fraction
from .HermSeries import generalized_binomial

ALPHA_SEARCH_LIMIT = 64     # largest alpha tried by minimal_alpha
WITNESS_SEARCH_CAP = 64     # largest expansion order tried when hunting a negative coefficient

_SERIES_RING, _X = ring("x", QQ, lex)


class InducibilityError(ValueError):
    """
    The parameters cannot support the requested decision or expansion.

    Non-positive or non-coprime inputs, a witness requested where the
    metric is induced, and disagreement between two exact routes.
    """


class Rule(Enum):
    WALLACH_G = "(alpha+s)mu in W\\{0} for all s>=0"
    WALLACH_GHAT = "(2alpha+s)mu in W\\{0} for all s>=0"
    DUAL_INTEGRALITY = "alpha and every mu_j positive integers"


@dataclass(frozen=True)
class Decision:
    verdict: bool
    rule: Rule
    checked: tuple[tuple[str, Fraction], ...]
    failing: tuple[str, Fraction] | None

    def as_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "rule": self.rule.value,
            "checked": [{"at": label, "value": str(value)} for label, value in self.checked],
            "failing": None if self.failing is None else {"at": self.failing[0], "value": str(self.failing[1])},
        }


def _positive(name: str, value) -> Fraction:
    if value is None:
        raise InducibilityError(f"{name} is required")
    value = to_fraction(value)
    if value <= 0:
        raise InducibilityError(f"{name} must be positive, got {value}")
    return value


def _wallach_decision(
    d: CartanDomain | ProductDomain,
    shift: Fraction,
    mu,
    rule: Rule,
) -> Decision:
    if isinstance(d, ProductDomain):
        pairs = list(zip(d.factors, d.exponents))
    else:
        pairs = [(d, _positive("decide: mu", mu))]
    checked: list[tuple[str, Fraction]] = []
    for factor, mu_j in pairs:
        wallach = factor.wallach
        last = floor(wallach.threshold / mu_j - shift)     # largest s still at or below the threshold
        for s in range(max(last, -1) + 2):
            value = (shift + s) * mu_j
            label = f"s={s}" if len(pairs) == 1 else f"{factor.label} s={s}"
            checked.append((label, value))
            if not wallach_member(wallach, value, exclude_zero=True):
                return Decision(False, rule, tuple(checked), (label, value))
    return Decision(True, rule, tuple(checked), None)


def decide_g_infinite(
    d: CartanDomain | ProductDomain,
    alpha,
    mu=None,
) -> Decision:
    alpha = _positive("decide g: alpha", alpha)
    decision = _wallach_decision(d, alpha, mu, Rule.WALLACH_G)
    if gvd:
        ic(decision)
    return decision


def decide_ghat_infinite(
    d: CartanDomain | ProductDomain,
    alpha,
    mu=None,
) -> Decision:
    alpha = _positive("decide ghat: alpha", alpha)
    return _wallach_decision(d, 2 * alpha, mu, Rule.WALLACH_GHAT)


def decide_dual_finite(alpha, mu) -> Decision:
    alpha = _positive("decide dual: alpha", alpha)
    mus = mu if isinstance(mu, tuple) else (mu,)
    checked = [("alpha", alpha)]
    for j, mu_j in enumerate(mus):
        checked.append((f"mu_{j + 1}" if len(mus) > 1 else "mu", _positive("decide dual: mu", mu_j)))
    for label, value in checked:
        if value.denominator != 1:
            return Decision(False, Rule.DUAL_INTEGRALITY, tuple(checked), (label, value))
    return Decision(True, Rule.DUAL_INTEGRALITY, tuple(checked), None)


def decide(
    d: CartanDomain | ProductDomain,
    kind: PotentialKind | str,
    alpha,
    mu=None,
) -> Decision:
    kind = PotentialKind(kind) if not isinstance(kind, PotentialKind) else kind
    if kind is PotentialKind.G:
        return decide_g_infinite(d, alpha, mu)
    if kind is PotentialKind.GHAT:
        return decide_ghat_infinite(d, alpha, mu)
    if isinstance(d, ProductDomain):
        mu = d.exponents
    return decide_dual_finite(alpha, mu)


def minimal_alpha(
    d: CartanDomain | ProductDomain,
    mu,
    kind: PotentialKind | str,
    limit: int = ALPHA_SEARCH_LIMIT,
) -> int | None:
    """Least positive integer alpha for which alpha times the metric is induced."""
    for alpha in range(1, limit + 1):
        if decide(d, kind, alpha, mu).verdict:
            return alpha
    return None


def _ground(q: Fraction):
    return QQ(q.numerator, q.denominator)


def _rs_binomial(q: Fraction, prec: int):
    """(1 + x)^q through x^(prec - 1)."""
    return rs_pow(_X + 1, Rational(q.numerator, q.denominator), _X, prec)


def _rs_coefficients(p, order: int) -> tuple[Fraction, ...]:
    return tuple(to_fraction(p.get((h,), QQ.zero)) for h in range(order + 1))


def _first_negative(coefficients: tuple[Fraction, ...]) -> int | None:
    for h, value in enumerate(coefficients):
        if value < 0:
            return h
    return None


@dataclass(frozen=True)
class ExpansionWitness:
    family: str                         # "psi", "propalphamu" or "binomial"
    a: int
    b: int
    k: int
    order: int
    coefficients: tuple[Fraction, ...]  # coefficient of x^h, i.e. A_h / h!
    first_negative: int | None

    @property
    def first_negative_value(self) -> Fraction | None:
        if self.first_negative is None:
            return None
        return self.coefficients[self.first_negative]

    def derivative(self, h: int) -> Fraction:
        """A_h, the h-th derivative at x = 0."""
        return self.coefficients[h] * factorial(h)

    def as_dict(self) -> dict:
        return {
            "family": self.family,
            "a": self.a,
            "b": self.b,
            "k": self.k,
            "order": self.order,
            "coefficients": [str(c) for c in self.coefficients],
            "first_negative": self.first_negative,
            "first_negative_value": None if self.first_negative is None else str(self.first_negative_value),
        }


def _check_abk(name: str, a: int, b: int, k: int) -> None:
    if min(a, b, k) < 1:
        raise InducibilityError(f"{name}: a, b, k must be positive, got {a}, {b}, {k}")
    if gcd(a, b) != 1:
        raise InducibilityError(f"{name}: gcd(a, b) = {gcd(a, b)}, expected 1")


def psi_expansion(a: int, b: int, k: int, order: int) -> ExpansionWitness:
    """Psi(x) = ((1+x)^(a/b) + 1)^(bk), unnormalized, so the constant is 2^(bk)."""
    _check_abk("psi expansion", a, b, k)
    q = Fraction(a, b)
    prec = order + 1
    direct = rs_pow(_rs_binomial(q, prec) + 1, b * k, _X, prec)
    series_route = _rs_coefficients(direct, order)
    closed_route = tuple(
        sum(comb(b * k, p) * generalized_binomial(p * q, h) for p in range(b * k + 1))
        for h in range(order + 1)
    )
    if series_route != closed_route:
        h = next(h for h in range(order + 1) if series_route[h] != closed_route[h])
        raise InducibilityError(
            f"psi expansion: routes disagree at x^{h}: {series_route[h]} != {closed_route[h]}"
        )
    if series_route[0] != 2 ** (b * k):
        raise InducibilityError(f"psi expansion: A_0 = {series_route[0]}, expected 2^{b * k}")
    return ExpansionWitness(
        family="psi",
        a=a,
        b=b,
        k=k,
        order=order,
        coefficients=series_route,
        first_negative=_first_negative(series_route),
    )


@dataclass(frozen=True)
class RatioReport:
    a: int
    b: int
    k: int
    order: int
    ratios: tuple[Fraction, ...]    # A_h / B_{h,1}, h = 0..order
    alternates_from: int            # sign(A_{h+1}) = -sign(A_h) for every h >= this

    def as_dict(self) -> dict:
        return {
            "a": self.a,
            "b": self.b,
            "k": self.k,
            "order": self.order,
            "ratios": [str(r) for r in self.ratios],
            "alternates_from": self.alternates_from,
        }


def psi_ratio_limit(a: int, b: int, k: int, order: int) -> RatioReport:
    """
    A_h / B_{h,1} with B_{h,1} = kb (a/b)(a/b - 1)...(a/b - h + 1), the p = 1
    term of A_h. The ratio tends to 1, so A_h inherits the sign alternation
    of B_{h,1} once h > a/b.
    """
    _check_abk("psi ratio", a, b, k)
    if b == 1:
        raise InducibilityError(f"psi ratio: a/b = {a} is an integer, Psi is a polynomial")
    if order < 2:
        raise InducibilityError(f"psi ratio: order {order} too small to observe alternation")
    witness = psi_expansion(a, b, k, order)
    q = Fraction(a, b)
    ratios = []
    for h in range(order + 1):
        single = k * b * generalized_binomial(q, h) * factorial(h)
        if not single:
            raise InducibilityError(f"psi ratio: B_{{{h},1}} vanishes")
        ratios.append(witness.derivative(h) / single)
    signs = [1 if c > 0 else -1 if c < 0 else 0 for c in witness.coefficients]
    start = order
    while start > 0 and signs[start - 1] and signs[start - 1] == -signs[start]:
        start -= 1
    if start == order:
        raise InducibilityError(f"psi ratio: no sign alternation of A_h up to h={order}")
    return RatioReport(a=a, b=b, k=k, order=order, ratios=tuple(ratios), alternates_from=start)


def propalphamu_witness(a: int, b: int, k: int, order: int) -> ExpansionWitness:
    """
    Phi(x) / 2^(bk) with Phi = ((1+x)^(a/2b) + 1)^(bk) (1+x)^(ak/2); the
    normalization makes the constant term 1, as for e^D.
    """
    _check_abk("propalphamu", a, b, k)
    q = Fraction(a, 2 * b)
    tail = Fraction(a * k, 2)
    prec = order + 1
    direct = rs_mul(
        rs_pow(_rs_binomial(q, prec) + 1, b * k, _X, prec),
        _rs_binomial(tail, prec),
        _X,
        prec,
    )
    scale = Fraction(1, 2 ** (b * k))
    series_route = tuple(c * scale for c in _rs_coefficients(direct, order))
    closed_route = tuple(
        scale * sum(comb(b * k, p) * generalized_binomial(p * q + tail, h) for p in range(b * k + 1))
        for h in range(order + 1)
    )
    if series_route != closed_route:
        raise InducibilityError("propalphamu: series and binomial routes disagree")
    return ExpansionWitness(
        family="propalphamu",
        a=a,
        b=b,
        k=k,
        order=order,
        coefficients=series_route,
        first_negative=_first_negative(series_route),
    )


def binomial_witness(q, order: int) -> ExpansionWitness:
    """(1 + x)^q; for q > 0 not an integer the first negative is at ceil(q) + 1."""
    q = _positive("binomial witness: exponent", q)
    order = max(order, ceil(q) + 1)
    coefficients = _rs_coefficients(_rs_binomial(q, order + 1), order)
    return ExpansionWitness(
        family="binomial",
        a=q.numerator,
        b=q.denominator,
        k=1,
        order=order,
        coefficients=coefficients,
        first_negative=_first_negative(coefficients),
    )


@dataclass(frozen=True)
class DualRefutation:
    kind: PotentialKind
    alpha: Fraction
    mu: Fraction
    route: str
    witness: ExpansionWitness

    def as_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "alpha": str(self.alpha),
            "mu": str(self.mu),
            "route": self.route,
            "witness": self.witness.as_dict(),
        }


def _hunt(build, order: int) -> ExpansionWitness:
    witness = build(order)
    while witness.first_negative is None and order < WITNESS_SEARCH_CAP:
        order = min(2 * order, WITNESS_SEARCH_CAP)
        witness = build(order)
    if witness.first_negative is None:
        raise InducibilityError(f"dual refutation: no negative coefficient through x^{order}")
    return witness


def dual_refutation(
    alpha,
    mu,
    kind: PotentialKind | str,
    order: int = 10,
) -> DualRefutation | None:
    """
    The one-variable expansion refuting finite inducibility of alpha g* or
    alpha ghat*, or None when alpha and mu are positive integers.

    Along the fiber axis z = 0 both duals restrict to alpha log(1 + |w|^2);
    along a base axis w = 0 to c log(1 + |z|^2) with c = alpha mu (g*) or
    2 alpha mu (ghat*). With both integral, mu = a/b (2mu = a/b for ghat*)
    forces b | alpha and the obstruction is Psi or Phi with k = alpha / b.
    """
    kind = PotentialKind(kind) if not isinstance(kind, PotentialKind) else kind
    if not kind.is_dual:
        raise InducibilityError(f"dual refutation: {kind.value} is not a dual kind")
    alpha = _positive("dual refutation: alpha", alpha)
    mu = _positive("dual refutation: mu", mu)
    if decide_dual_finite(alpha, mu).verdict:
        return None
    if alpha.denominator != 1:
        return DualRefutation(kind, alpha, mu, "fiber-axis binomial", binomial_witness(alpha, order))
    base_exponent = alpha * mu if kind is PotentialKind.G_STAR else 2 * alpha * mu
    if base_exponent.denominator != 1:
        return DualRefutation(kind, alpha, mu, "base-axis binomial", binomial_witness(base_exponent, order))
    ratio = mu if kind is PotentialKind.G_STAR else 2 * mu
    a, b = ratio.numerator, ratio.denominator
    k = int(alpha) // b
    if kind is PotentialKind.G_STAR:
        witness = _hunt(lambda h: psi_expansion(a, b, k, h), order)
        return DualRefutation(kind, alpha, mu, "psi", witness)
    witness = _hunt(lambda h: propalphamu_witness(a, b, k, h), order)
    return DualRefutation(kind, alpha, mu, "propalphamu", witness)


@dataclass(frozen=True)
class KECondition:
    mu_ke: Fraction | tuple[Fraction, ...]
    ratio_bound: bool           # gamma / (n + 1) <= 1
    ratio_equality: bool        # equality, only for the rank-1 balls

    def check(self, mu) -> bool:
        if isinstance(self.mu_ke, tuple):
            return tuple(to_fraction(m) for m in mu) == self.mu_ke
        return to_fraction(mu) == self.mu_ke

    def as_dict(self) -> dict:
        value = [str(m) for m in self.mu_ke] if isinstance(self.mu_ke, tuple) else str(self.mu_ke)
        return {"mu_ke": value, "ratio_bound": self.ratio_bound, "ratio_equality": self.ratio_equality}


def _base(d: CHDomain | CartanDomain | ProductDomain) -> CartanDomain | ProductDomain:
    return d.base if isinstance(d, CHDomain) else d


def ke_condition(d: CHDomain | CartanDomain | ProductDomain) -> KECondition:
    """The metric is Kaehler-Einstein iff mu_j = gamma_j / (n + 1), n the base dimension."""
    base = _base(d)
    if isinstance(base, ProductDomain):
        mu_ke = tuple(Fraction(factor.gamma, base.n + 1) for factor in base.factors)
        return KECondition(
            mu_ke=mu_ke,
            ratio_bound=all(m <= 1 for m in mu_ke),
            ratio_equality=any(m == 1 for m in mu_ke),
        )
    mu_ke = Fraction(base.gamma, base.n + 1)
    if mu_ke > 1 or (mu_ke == 1) != base.is_ball:
        raise InducibilityError(
            f"ke condition: gamma/(n+1) = {mu_ke} for {base.label} breaks the rank-1 equality case"
        )
    return KECondition(mu_ke=mu_ke, ratio_bound=True, ratio_equality=mu_ke == 1)


def csc_sum(p: CHDomain | ProductDomain) -> Fraction:
    """sum_j (n + 1 - gamma_j / mu_j) n_j."""
    if isinstance(p, CHDomain):
        if isinstance(p.base, ProductDomain):
            p = p.base
        else:
            p = ProductDomain((p.base,), (p.mu,))
    n = p.n
    return sum(
        ((n + 1 - Fraction(factor.gamma) / mu) * factor.n for factor, mu in zip(p.factors, p.exponents)),
        Fraction(0),
    )


def csc_condition(p: CHDomain | ProductDomain) -> bool:
    """The generalized metric is extremal, equivalently CSC, iff the sum vanishes."""
    return csc_sum(p) == 0


@dataclass(frozen=True)
class ODEResidual:
    gamma: Fraction
    mu: Fraction
    n: int
    d_param: int
    order: int
    ratio: tuple[Fraction, ...]                             # coefficients of L/R
    certificate: tuple[tuple[int, Fraction], ...]           # (0, r_0) and the first j > 0 with r_j != 0

    @property
    def constant(self) -> bool:
        return len(self.certificate) < 2

    def as_dict(self) -> dict:
        return {
            "gamma": str(self.gamma),
            "mu": str(self.mu),
            "n": self.n,
            "d": self.d_param,
            "order": self.order,
            "constant_ratio": self.constant,
            "certificate": [[j, str(value)] for j, value in self.certificate],
        }


def ode_residual(
    gamma,
    mu,
    n: int,
    d_param: int | None = None,
    order: int = 8,
) -> ODEResidual:
    """
    h(X) = -c log(1 - X), c = (gamma + mu) / ((mu + 1)(d + 2)), and
        L = (mu X h' + (gamma + mu)/(d + 2))^d [X h']'
        R = e^((n + 2) h)
    L = k R would be needed for some constant k; a non-constant L/R rules every k out.
    """
    gamma = _positive("ode residual: gamma", gamma)
    mu = _positive("ode residual: mu", mu)
    d_param = n if d_param is None else d_param
    if n < 1 or d_param < 1:
        raise InducibilityError(f"ode residual: n = {n}, d = {d_param} must be positive")
    prec = order + 2
    c = (gamma + mu) / ((mu + 1) * (d_param + 2))
    h = rs_log(1 - _X, _X, prec).mul_ground(_ground(-c))
    x_h_prime = rs_mul(_X, rs_diff(h, _X), _X, prec)
    inner = x_h_prime.mul_ground(_ground(mu)) + _ground((gamma + mu) / (d_param + 2))
    left = rs_mul(rs_pow(inner, d_param, _X, prec), rs_diff(x_h_prime, _X), _X, order + 1)
    right = rs_exp(h.mul_ground(QQ(n + 2)), _X, order + 1)
    ratio = _rs_coefficients(rs_mul(left, rs_series_inversion(right, _X, order + 1), _X, order + 1), order)
    certificate = [(0, ratio[0])]
    for j in range(1, order + 1):
        if ratio[j]:
            certificate.append((j, ratio[j]))
            break
    if gvd:
        ic(c, ratio)
    return ODEResidual(
        gamma=gamma,
        mu=mu,
        n=n,
        d_param=d_param,
        order=order,
        ratio=ratio,
        certificate=tuple(certificate),
    )


class CrossValidationError(InducibilityError):
    """The closed-form decision and the Calabi matrix disagree."""


@dataclass(frozen=True)
class AgreementReport:
    kind: PotentialKind
    alpha: Fraction
    mu: Fraction
    order: int
    decision: Decision
    projective: ProjectiveVerdict

    def as_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "alpha": str(self.alpha),
            "mu": str(self.mu),
            "order": self.order,
            "decision": self.decision.as_dict(),
            "projective": self.projective.as_dict(),
            "agree": True,
        }


def cross_validate(
    d: CartanDomain,
    alpha,
    mu,
    kind: PotentialKind | str,
    order: int,
) -> AgreementReport:
    """The series is expanded through order; the Calabi basis runs to order // 2."""
    kind = PotentialKind(kind) if not isinstance(kind, PotentialKind) else kind
    alpha = _positive("cross validate: alpha", alpha)
    mu = _positive("cross validate: mu", mu)
    decision = decide(d, kind, alpha, mu)
    potential = ch_potential(CHDomain(d, mu), kind, order).diastasis.scale(alpha)
    projective = projective_witness(potential, order // 2)
    if decision.verdict == projective.refuted:
        dump = json.dumps(potential.series.to_json(), sort_keys=True)
        raise CrossValidationError(
            f"cross validate: decision {decision.verdict} but Calabi matrix "
            f"{projective.verdict.value} for {d.label} {kind.value} alpha={alpha} mu={mu}: {dump}"
        )
    return AgreementReport(
        kind=kind,
        alpha=alpha,
        mu=mu,
        order=order,
        decision=decision,
        projective=projective,
    )

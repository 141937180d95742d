#!/usr/bin/env python3
# tab-width:4

"""
Curvature - exact metric and Gaussian curvature of closed-form potentials
pulled back along a holomorphic curve, and series-level Ricci and scalar
curvature of a diastasis.

Along a curve the potential is  sign * log det M(z, zbar)  for a matrix M of
rational functions. With L(f) = f f_zzbar - f_z f_zbar:

    h = sign * ddbar log det M          = sign * L(det) / det^2
    K = -(1/h) ddbar log h              = -L(h) / h^3

No 2/pi prefactor is carried: the Fubini-Study line gives K = 2 and the
hyperbolic disc K = -2.

ricci_series returns the normal form of log det(d_a dbar_b D), the potential
of -Ric. On CH^n it is (n + 1) D.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations

from asserttool import ic
from globalverbose import gvd
from sympy import Poly
from sympy import Rational
from sympy import Symbol

from .CalabiAnalysis import Diastasis
from .CalabiAnalysis import dual_diastasis
from .CalabiAnalysis import normalize_diastasis
from .CalabiAnalysis import psd_check
from .CHMetrics import hessian
from .GenericNorm import permutation_sign
from .GenericNorm import series_determinant
from .GRat import grat
from .GRat import real_part
from .GRat import to_fraction
from .HermSeries import HermSeries
from .HermSeries import HermSeriesError
from .HermSeries import series_log_normalized
from .HermSeries import series_mul
from .HermSeries import series_pow_rational
from .HermSeries import substitute_negate_bar
from .RationalFunction import RationalFunction
from .RationalFunction import RationalFunctionError
from .RationalFunction import polynomial_coefficients
from .RationalFunction import substitute_line

CURVE_VARIABLES = ("z", "zb")
BISECTION_WIDTH = Fraction(1, 2**20)    # width of the bracket around the smallest root of P
SAMPLE_POINTS = 16                      # rationals on [0, x0) where P > 0 is re-checked

U21_DIRECTION = grat(1, Fraction(1, 2))     # the line z = (1 + i/2) x
U21_P = (49152, 0, 16384, 0, -250368, 0, -49280, 0, -79200, 0, -555000, 0, 312500)
U21_Q_ROOT = (128, 0, 288, 0, -120, 0, -50, 0, 625)
U21_R_DEGREE = 36
U21_K_P_EXPONENT = 3        # denominator of K along the line is c P^3


class CurvatureError(ValueError):
    """
    The potential or series cannot support the curvature computation.

    A vanishing determinant or metric, a degenerate metric at the origin, a
    restriction that fails to be real, a missing sign change, and a failed
    duality identity all land here.
    """


Matrix = list[list[RationalFunction]]


def _constant(value) -> RationalFunction:
    return RationalFunction.constant(CURVE_VARIABLES, value)


def _identity(size: int) -> Matrix:
    return [[_constant(1 if i == j else 0) for j in range(size)] for i in range(size)]


def _matmul(a: Matrix, b: Matrix) -> Matrix:
    return [
        [sum((a[i][k] * b[k][j] for k in range(len(b))), _constant(0)) for j in range(len(b[0]))]
        for i in range(len(a))
    ]


def _matadd(a: Matrix, b: Matrix) -> Matrix:
    return [[x + y for x, y in zip(row_a, row_b)] for row_a, row_b in zip(a, b)]


def _matscale(a: Matrix, factor) -> Matrix:
    return [[x * factor for x in row] for row in a]


def _inverse2(a: Matrix) -> Matrix:
    """2x2 inverse by adjugate over determinant."""
    det = a[0][0] * a[1][1] - a[0][1] * a[1][0]
    if not det:
        raise CurvatureError("inverse: 2x2 matrix is singular")
    return [
        [a[1][1] / det, -a[0][1] / det],
        [-a[1][0] / det, a[0][0] / det],
    ]


def _determinant(a: Matrix) -> RationalFunction:
    size = len(a)
    total = _constant(0)
    for permutation in permutations(range(size)):
        term = _constant(permutation_sign(permutation))
        for row, column in enumerate(permutation):
            term = term * a[row][column]
        total = total + term
    return total


@dataclass(frozen=True)
class CurvePotential:
    label: str
    matrix: tuple[tuple[RationalFunction, ...], ...]    # potential is sign * log det(matrix)
    sign: int = 1

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise CurvatureError(f"curve potential: sign must be +1 or -1, got {self.sign}")
        size = len(self.matrix)
        if not size or any(len(row) != size for row in self.matrix):
            raise CurvatureError(f"curve potential: {self.label} matrix is not square")

    def determinant(self) -> RationalFunction:
        return _determinant([list(row) for row in self.matrix])


def fubini_study_curve() -> CurvePotential:
    """log(1 + z zbar)."""
    z = RationalFunction.variable(CURVE_VARIABLES, "z")
    zb = RationalFunction.variable(CURVE_VARIABLES, "zb")
    return CurvePotential("fubini-study", ((1 + z * zb,),))


def hyperbolic_curve() -> CurvePotential:
    """-log(1 - z zbar)."""
    z = RationalFunction.variable(CURVE_VARIABLES, "z")
    zb = RationalFunction.variable(CURVE_VARIABLES, "zb")
    return CurvePotential("hyperbolic", ((1 - z * zb,),), sign=-1)


def u21_dual_curve() -> CurvePotential:
    """
    log det A*(W, V) for the dual of the bounded domain in Sym(2) x M(2,1),
    along W = [[0, z], [z, 0]], V = (z, 0)^t:

        A* = I + W Wbar + 1/2 V Vbar^t
               + 1/2 (I - W)(I + Wbar)^-1 Vbar V^t (I - W)^-1 (I + Wbar)
    """
    z = RationalFunction.variable(CURVE_VARIABLES, "z")
    zb = RationalFunction.variable(CURVE_VARIABLES, "zb")
    zero = _constant(0)
    identity = _identity(2)
    W = [[zero, z], [z, zero]]
    W_bar = [[zero, zb], [zb, zero]]
    V_Vbar = [[z * zb, zero], [zero, zero]]     # V Vbar^t
    Vbar_V = [[zb * z, zero], [zero, zero]]     # Vbar V^t
    one_minus_W = _matadd(identity, _matscale(W, -1))
    one_plus_W_bar = _matadd(identity, W_bar)
    tail = _matmul(
        _matmul(_matmul(one_minus_W, _inverse2(one_plus_W_bar)), Vbar_V),
        _matmul(_inverse2(one_minus_W), one_plus_W_bar),
    )
    A = _matadd(
        _matadd(identity, _matmul(W, W_bar)),
        _matadd(_matscale(V_Vbar, Fraction(1, 2)), _matscale(tail, Fraction(1, 2))),
    )
    return CurvePotential("u21-dual", tuple(tuple(row) for row in A))


def _laplacian_form(f: RationalFunction) -> RationalFunction:
    """f f_zzbar - f_z f_zbar."""
    f_z = f.derivative("z")
    return f * f_z.derivative("zb") - f_z * f.derivative("zb")


def _log_laplacian(f: RationalFunction) -> RationalFunction:
    """ddbar log f, split over numerator and denominator."""
    if not f:
        raise CurvatureError("log laplacian: function is identically zero")
    p = RationalFunction(f.numerator)
    q = RationalFunction(f.denominator)
    out = _laplacian_form(p) / (p * p)
    if not q.is_constant():
        out = out - _laplacian_form(q) / (q * q)
    return out


def metric_along_curve(p: CurvePotential) -> RationalFunction:
    det = p.determinant()
    if not det:
        raise CurvatureError(f"metric along curve: determinant of {p.label} is identically zero")
    h = _log_laplacian(det) * p.sign
    if gvd:
        ic(p.label, h.degree("z"))
    return h


def restrict_to_line(h: RationalFunction, direction) -> RationalFunction:
    """h(lambda x, conj(lambda) x) as a real rational function of x."""
    direction = grat(direction)
    if not direction:
        raise CurvatureError("restrict to line: direction must be nonzero")
    try:
        restricted = substitute_line(h, {"z": direction})
    except RationalFunctionError as exc:
        raise CurvatureError(f"restrict to line: {exc}") from exc
    if not restricted.is_real():
        raise CurvatureError(f"restrict to line: restriction along {direction} is not real")
    return restricted


def sectional_curvature_along_curve(h: RationalFunction) -> RationalFunction:
    if not h:
        raise CurvatureError("sectional curvature: metric is identically zero")
    return -_log_laplacian(h) / h


def _horner(coefficients: Sequence[Fraction], x: Fraction) -> Fraction:
    value = Fraction(0)
    for c in reversed(coefficients):
        value = value * x + c
    return value


def _sympy_poly(coefficients: Sequence[Fraction], x: Symbol) -> Poly:
    return Poly(
        [Rational(c.numerator, c.denominator) for c in reversed(coefficients)],
        x,
        domain="QQ",
    )


@dataclass(frozen=True)
class BlowupWitness:
    x0_low: Fraction
    x0_high: Fraction
    p_at_zero: Fraction
    p_exponent: int                 # denominator of K is c P^p_exponent
    p_positive_below: bool          # count_roots finds no root of P on [0, x0_low]
    r_degree: int
    r_positive_coefficients: bool
    r_positive_on_bracket: bool

    @property
    def width(self) -> Fraction:
        return self.x0_high - self.x0_low

    @property
    def divergence(self) -> bool:
        """K = R / P^k with k >= 1, R > 0 and P -> 0 from above: K -> +oo at x0."""
        return (
            self.p_exponent >= 1
            and self.p_at_zero > 0
            and self.p_positive_below
            and self.r_positive_coefficients
            and self.r_positive_on_bracket
        )

    def as_dict(self) -> dict:
        return {
            "x0": [str(self.x0_low), str(self.x0_high)],
            "width": str(self.width),
            "p_at_zero": str(self.p_at_zero),
            "p_exponent": self.p_exponent,
            "r_degree": self.r_degree,
            "r_positive_coefficients": self.r_positive_coefficients,
            "divergence": self.divergence,
        }


def denominator_exponent(k: RationalFunction, p: Sequence) -> int | None:
    """k with denominator(K) = c P^k, or None when another factor is left."""
    p_line = _line_polynomial([to_fraction(c) for c in p], k)
    if p_line.is_constant():
        raise CurvatureError("blowup witness: P must not be constant")
    rest = RationalFunction(k.denominator)
    exponent = 0
    while not rest.is_constant():
        rest = rest / p_line
        if not rest.denominator.is_ground:
            return None
        exponent += 1
    return exponent


def blowup_witness(
    k: RationalFunction,
    p: Sequence,
    width: Fraction = BISECTION_WIDTH,
) -> BlowupWitness:
    """
    Bracket the smallest positive root x0 of P on (0, 1] by exact-sign
    bisection and certify that K = R / P^k is positive up to it.
    """
    p = [to_fraction(c) for c in p]
    if not p or not p[0]:
        raise CurvatureError("blowup witness: P must be nonzero at the origin")
    x = Symbol("x")
    p_poly = _sympy_poly(p, x)
    exponent = denominator_exponent(k, p)
    if exponent is None:
        raise CurvatureError("blowup witness: denominator of K is not c P^k")
    if not exponent:
        raise CurvatureError("blowup witness: P does not divide the denominator of K")
    roots = [interval for interval, _ in p_poly.intervals(inf=0, sup=1) if interval[1] > 0]
    if not roots:
        raise CurvatureError("blowup witness: P has no positive root in (0, 1]")
    low, high = (to_fraction(e) for e in min(roots, key=lambda pair: pair[0]))
    if _horner(p, low) == 0:
        high = low
    elif _horner(p, high) == 0:
        low = high
    if low != high and _horner(p, low) * _horner(p, high) > 0:
        raise CurvatureError(f"blowup witness: no sign change of P on [{low}, {high}]")
    while high - low > width:
        middle = (low + high) / 2
        value = _horner(p, middle)
        if value == 0:
            low = high = middle
            break
        if (value > 0) == (_horner(p, low) > 0):
            low = middle
        else:
            high = middle
    if gvd:
        ic(low, high)

    below = p_poly.count_roots(0, Rational(low.numerator, low.denominator))
    if _horner(p, low) == 0:
        below -= 1
    p_positive_below = below == 0
    samples = [low * j / SAMPLE_POINTS for j in range(SAMPLE_POINTS)]
    p_positive_below = p_positive_below and all(_horner(p, s) > 0 for s in samples)

    r_function = k
    for _ in range(exponent):
        r_function = r_function * _line_polynomial(p, k)
    r = polynomial_coefficients(r_function.numerator)
    nonzero = [c for c in r if c]
    r_positive = bool(nonzero) and all(c > 0 for c in nonzero)
    return BlowupWitness(
        x0_low=low,
        x0_high=high,
        p_at_zero=p[0],
        p_exponent=exponent,
        p_positive_below=p_positive_below,
        r_degree=len(r) - 1,
        r_positive_coefficients=r_positive,
        r_positive_on_bracket=_horner(r, low) > 0 and _horner(r, high) > 0,
    )


def _line_polynomial(coefficients: Sequence[Fraction], like: RationalFunction) -> RationalFunction:
    names = like.variables
    return RationalFunction.from_coefficients(
        names, {(power,): c for power, c in enumerate(coefficients) if c}
    )


@dataclass(frozen=True)
class U21Report:
    h: RationalFunction
    k: RationalFunction
    h_matches: bool
    h_at_zero: Fraction
    k_p_exponent: int | None
    r_degree: int
    witness: BlowupWitness | None

    @property
    def passed(self) -> bool:
        return (
            self.h_matches
            and self.h_at_zero == 3
            and self.k_p_exponent == U21_K_P_EXPONENT
            and self.r_degree == U21_R_DEGREE
            and self.witness is not None
            and self.witness.divergence
        )

    def as_dict(self) -> dict:
        return {
            "P": [str(c) for c in polynomial_coefficients(self.h.numerator)],
            "Q": [str(c) for c in polynomial_coefficients(self.h.denominator)],
            "R": [str(c) for c in polynomial_coefficients(self.k.numerator)],
            "checks": {
                "h_matches": self.h_matches,
                "h_at_zero": str(self.h_at_zero),
                "k_p_exponent": self.k_p_exponent,
                "r_degree": self.r_degree,
                "blowup": None if self.witness is None else self.witness.as_dict(),
            },
            "passed": self.passed,
        }


def u21_report(direction=U21_DIRECTION, blowup: bool = True) -> U21Report:
    """h and K of the U(2,1) dual along the curve, restricted to the line."""
    h = metric_along_curve(u21_dual_curve())
    k = sectional_curvature_along_curve(h)
    h_line = restrict_to_line(h, direction)
    k_line = restrict_to_line(k, direction)
    p = [Fraction(c) for c in U21_P]
    q_root = _line_polynomial([Fraction(c) for c in U21_Q_ROOT], h_line)
    expected = _line_polynomial(p, h_line) / (q_root * q_root)
    witness = blowup_witness(k_line, p) if blowup else None
    return U21Report(
        h=h_line,
        k=k_line,
        h_matches=h_line == expected,
        h_at_zero=real_part(h_line.evaluate({"x": 0})),
        k_p_exponent=denominator_exponent(k_line, p),
        r_degree=k_line.numerator.degree(0),
        witness=witness,
    )


@dataclass(frozen=True)
class RicciSeries:
    source: Diastasis
    potential: Diastasis        # normal form of log det of the Hessian, through order H - 2

    @property
    def order(self) -> int:
        return self.potential.order


def _metric_at_origin(g: list[list[HermSeries]]) -> None:
    origin = tuple(tuple(entry.constant_term() for entry in row) for row in g)
    verdict = psd_check(origin)
    if not verdict.psd or verdict.rank < len(g):
        raise CurvatureError("ricci: metric is degenerate at the origin")


def _metric_determinant(d: Diastasis, order: int) -> tuple[list[list[HermSeries]], HermSeries]:
    if order < 2:
        raise CurvatureError(f"ricci: order {order} leaves no metric")
    if d.order < order:
        raise CurvatureError(f"ricci: diastasis known to order {d.order} < {order}")
    g = hessian(d.series.truncate(order))
    _metric_at_origin(g)
    return g, series_determinant(g)


def ricci_series(d: Diastasis, order: int) -> RicciSeries:
    _, det = _metric_determinant(d, order)
    try:
        potential = normalize_diastasis(series_log_normalized(det))
    except HermSeriesError as exc:
        raise CurvatureError(f"ricci: {exc}") from exc
    return RicciSeries(source=d, potential=potential)


@dataclass(frozen=True)
class DualityReport:
    order: int
    terms: int      # coefficients compared

    def as_dict(self) -> dict:
        return {"order": self.order, "terms": self.terms, "holds": True}


def ricci_duality_check(d: Diastasis, order: int) -> DualityReport:
    """Ricci potential of the dual equals the Ricci potential at (z, -zbar)."""
    direct = ricci_series(d, order).potential.series
    dual = ricci_series(dual_diastasis(d), order).potential.series
    expected = substitute_negate_bar(direct)
    if dual != expected:
        raise CurvatureError(f"ricci duality: mismatch through order {order - 2}")
    return DualityReport(order=order - 2, terms=len(dual))


def ke_defect(d: Diastasis, lam, order: int) -> HermSeries:
    """Ricci potential minus lam D; zero when Kaehler-Einstein with constant -lam."""
    ricci = ricci_series(d, order)
    return ricci.potential.series - d.series.truncate(ricci.order).scale(to_fraction(lam))


def _series_inverse(g: list[list[HermSeries]], det: HermSeries, order: int) -> list[list[HermSeries]]:
    """Adjugate over determinant, every entry through order."""
    size = len(g)
    constant = to_fraction(det.constant_term().x)
    reciprocal = series_pow_rational(det.truncate(order).scale(1 / constant), -1).scale(1 / constant)
    if size == 1:
        return [[reciprocal]]
    inverse = []
    for i in range(size):
        row = []
        for j in range(size):
            minor = [
                [g[r][c].truncate(order) for c in range(size) if c != i]
                for r in range(size)
                if r != j
            ]
            cofactor = series_determinant(minor).scale((-1) ** (i + j))
            row.append(series_mul(cofactor, reciprocal))
        inverse.append(row)
    return inverse


def scalar_curvature_series(d: Diastasis, order: int) -> HermSeries:
    """g^{a bbar} R_{a bbar} with R = -ddbar log det g, through order - 4."""
    if order < 4:
        raise CurvatureError(f"scalar curvature: order {order} < 4")
    g, det = _metric_determinant(d, order)
    try:
        log_det = series_log_normalized(det)
    except HermSeriesError as exc:
        raise CurvatureError(f"scalar curvature: {exc}") from exc
    ricci = [[-entry for entry in row] for row in hessian(log_det)]
    inverse = _series_inverse(g, det, order - 4)
    size = len(g)
    total = HermSeries(d.nvars, order - 4)
    for a in range(size):
        for b in range(size):
            total = total + series_mul(inverse[b][a], ricci[a][b])
    return total


def scalar_duality_check(d: Diastasis, order: int) -> DualityReport:
    """scal of the dual equals -scal at (z, -zbar)."""
    direct = scalar_curvature_series(d, order)
    dual = scalar_curvature_series(dual_diastasis(d), order)
    if dual != -substitute_negate_bar(direct):
        raise CurvatureError(f"scalar duality: mismatch through order {order - 4}")
    return DualityReport(order=order - 4, terms=len(dual))

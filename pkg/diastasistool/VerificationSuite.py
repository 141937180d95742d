#!/usr/bin/env python3
# tab-width:4

"""
VerificationSuite - the acceptance checks as one runnable suite.

Every check is exact. A check passes, fails, or (for the ones whose content
is a refutation certificate) is refuted as expected. A failure never raises
out of run_suite: the module error is recorded as the check's witness.

Report layout (schema_version "1"):

    {"schema_version": "1", "suite": ..., "order": H, "passed": bool,
     "checks": {name: {"status": ..., "witness": {...}, "seconds": ...}}}

"seconds" is present only when timings were requested.
"""

from __future__ import annotations

import time
from collections.abc import Callable
from collections.abc import Sequence
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from asserttool import ic
from globalverbose import gvd

from .CalabiAnalysis import CalabiError
from .CalabiAnalysis import dual_diastasis
from .CalabiAnalysis import normalize_diastasis
from .CartanDomain import DomainError
from .CartanDomain import Family
from .CartanDomain import ProductDomain
from .CartanDomain import structural_constants
from .CHMetrics import CHDomain
from .CHMetrics import CHMetricError
from .CHMetrics import PotentialKind
from .CHMetrics import ch_potential
from .CHMetrics import fiber_derivative_identity
from .CHMetrics import rank1_compactification_check
from .CHMetrics import verify_block_structure
from .Curvature import BISECTION_WIDTH
from .Curvature import U21_K_P_EXPONENT
from .Curvature import U21_R_DEGREE
from .Curvature import CurvatureError
from .Curvature import ke_defect
from .Curvature import ricci_duality_check
from .Curvature import scalar_duality_check
from .Curvature import u21_report
from .FlagManifold import FlagError
from .FlagManifold import admissible_minor
from .FlagManifold import check_nilpotency
from .FlagManifold import coordinate_chart
from .FlagManifold import forbidden_23_scan
from .FlagManifold import gram_matrix
from .FlagManifold import no_cancellation_check
from .FlagManifold import parse_diagram
from .GRat import grat
from .HermSeries import HermSeries
from .HermSeries import HermSeriesError
from .HermSeries import series_log
from .Inducibility import InducibilityError
from .Inducibility import cross_validate
from .Inducibility import csc_sum
from .Inducibility import decide_dual_finite
from .Inducibility import decide_g_infinite
from .Inducibility import ode_residual
from .Inducibility import propalphamu_witness
from .Inducibility import psi_expansion
from .Inducibility import psi_ratio_limit
from .RationalFunction import RationalFunctionError

SCHEMA_VERSION = "1"
SUITE_NAME = "kaehler-duality"
DEFAULT_SUITE_ORDER = 8     # truncation order of the series-level checks

# coefficient dicts over (z1, z2, z3, z1b, z2b, z3b)
SU3_DELTA_1 = {
    (0, 0, 0, 0, 0, 0): 1,
    (1, 0, 0, 1, 0, 0): 1,
    (0, 1, 0, 0, 1, 0): 1,
    (1, 0, 1, 1, 0, 1): Fraction(1, 4),
    (0, 1, 0, 1, 0, 1): Fraction(1, 2),
    (1, 0, 1, 0, 1, 0): Fraction(1, 2),
}
SU3_DELTA_2 = {
    (0, 0, 0, 0, 0, 0): 1,
    (0, 1, 0, 0, 1, 0): 1,
    (0, 0, 1, 0, 0, 1): 1,
    (1, 0, 1, 1, 0, 1): Fraction(1, 4),
    (0, 1, 0, 1, 0, 1): Fraction(-1, 2),
    (1, 0, 1, 0, 1, 0): Fraction(-1, 2),
}

MODULE_ERRORS = (
    CalabiError,
    CHMetricError,
    CurvatureError,
    DomainError,
    FlagError,
    HermSeriesError,
    InducibilityError,
    RationalFunctionError,
)


class VerificationError(ValueError):
    """
    An acceptance check computed a value other than the one it certifies.
    """


class Status(Enum):
    PASS = "pass"
    FAIL = "fail"
    REFUTED_AS_EXPECTED = "refuted-as-expected"


@dataclass(frozen=True)
class CheckResult:
    name: str
    status: Status
    witness: dict
    seconds: float | None = None

    def as_dict(self) -> dict:
        record = {"status": self.status.value, "witness": self.witness}
        if self.seconds is not None:
            record["seconds"] = round(self.seconds, 3)
        return record


@dataclass(frozen=True)
class RunReport:
    suite: str
    order: int
    checks: tuple[CheckResult, ...]

    @property
    def passed(self) -> bool:
        return all(check.status is not Status.FAIL for check in self.checks)

    @property
    def failures(self) -> tuple[str, ...]:
        return tuple(check.name for check in self.checks if check.status is Status.FAIL)

    def as_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "suite": self.suite,
            "order": self.order,
            "passed": self.passed,
            "checks": {check.name: check.as_dict() for check in self.checks},
        }


CheckFunction = Callable[[int], dict]
CHECKS: dict[str, tuple[CheckFunction, bool]] = {}


def _check(name: str, refutes: bool = False):
    def register(function: CheckFunction) -> CheckFunction:
        CHECKS[name] = (function, refutes)
        return function

    return register


def _expect(condition: bool, message: str) -> None:
    if not condition:
        raise VerificationError(message)


def _ball(n: int):
    return structural_constants(Family.BALL, n)


@_check("wallach")
def check_wallach(order: int) -> dict:
    grid = [
        (Fraction(p, q), Fraction(s, t))
        for p, q in ((1, 1), (1, 2), (3, 2), (2, 1))
        for s, t in ((1, 1), (1, 3), (1, 2), (5, 4), (7, 3))
    ]
    for n in (1, 2, 3):
        for alpha, mu in grid:
            decision = decide_g_infinite(_ball(n), alpha, mu)
            _expect(decision.verdict, f"wallach: CH{n} alpha={alpha} mu={mu} refused")
    sym2 = structural_constants(Family.III, 2)
    induced = decide_g_infinite(sym2, 1, Fraction(1, 2))
    refused = decide_g_infinite(sym2, 1, Fraction(1, 3))
    _expect(induced.verdict, "wallach: III:2 alpha=1 mu=1/2 refused")
    _expect(not refused.verdict, "wallach: III:2 alpha=1 mu=1/3 accepted")
    _expect(refused.failing[0] == "s=0", f"wallach: III:2 mu=1/3 fails at {refused.failing[0]}")
    return {"grid_points": len(grid) * 3, "refused": refused.as_dict()}


@_check("psi_expansion")
def check_psi(order: int) -> dict:
    witness = psi_expansion(1, 2, 1, 20)
    _expect(witness.first_negative == 2, f"psi: first negative at x^{witness.first_negative}")
    _expect(witness.coefficients[2] == Fraction(-1, 4), f"psi: x^2 coefficient {witness.coefficients[2]}")
    wrong = [
        h for h, c in enumerate(witness.coefficients) if h >= 1 and not (-1) ** (h + 1) * c > 0
    ]
    _expect(not wrong, f"psi: sign of A_h does not alternate at h = {wrong}")
    ratio = psi_ratio_limit(1, 2, 1, 40)
    _expect(abs(ratio.ratios[40] - 1) < Fraction(1, 1000), f"psi: ratio at h=40 is {ratio.ratios[40]}")
    _expect(ratio.alternates_from == 1, f"psi: alternation starts at h = {ratio.alternates_from}")
    return {
        "first_negative": 2,
        "value": "-1/4",
        "alternates_from": ratio.alternates_from,
        "strict_alternation_through": len(witness.coefficients) - 1,
    }


@_check("propalphamu", refutes=True)
def check_propalphamu(order: int) -> dict:
    witness = propalphamu_witness(1, 1, 1, max(order, 2))
    _expect(witness.first_negative == 2, f"propalphamu: first negative at x^{witness.first_negative}")
    _expect(witness.first_negative_value == Fraction(-1, 16), f"propalphamu: value {witness.first_negative_value}")
    return {"first_negative": 2, "value": str(witness.first_negative_value)}


@_check("dual_trick")
def check_dual_trick(order: int) -> dict:
    depth = max(order, 12)
    hyperbolic = normalize_diastasis(-series_log(HermSeries.radial((1, -1), depth)))
    spherical = normalize_diastasis(series_log(HermSeries.radial((1, 1), depth)))
    _expect(dual_diastasis(hyperbolic) == spherical, "dual trick: dual of -log(1-|z|^2) != log(1+|z|^2)")
    return {"order": depth, "terms": len(spherical.series)}


@_check("block_structure")
def check_block_structure(order: int) -> dict:
    disc = _ball(1)
    potential = ch_potential(CHDomain(disc, 1), PotentialKind.GHAT, 6)
    blocks = verify_block_structure(potential, 3)
    identities = [fiber_derivative_identity(1, s, order=4).factor for s in (1, 2, 3)]
    agreements = []
    for alpha, mu in ((1, 1), (2, 1), (1, Fraction(1, 2)), (3, Fraction(1, 3)), (1, 2),
                      (2, Fraction(3, 2)), (1, Fraction(2, 3)), (4, Fraction(1, 4)), (1, 3)):
        agreements.append(cross_validate(disc, alpha, mu, PotentialKind.GHAT, order).decision.verdict)
    refuted = cross_validate(structural_constants(Family.I, 2, 2), 1, Fraction(1, 3), PotentialKind.GHAT, 4)
    _expect(refuted.projective.refuted, "block structure: I:2x2 mu=1/3 not refuted")
    return {
        "fiber_coefficients": [str(c) for c in blocks.fiber_coefficients],
        "identity_factors": [str(f) for f in identities],
        "grid_points": len(agreements) + 1,
        "refuted": refuted.as_dict()["projective"],
    }


@_check("compactification")
def check_compactification(order: int) -> dict:
    reports = [rank1_compactification_check(mu, order=8) for mu in (2, 3)]
    return {"weights": {str(r.mu): list(r.veronese_weights) for r in reports}}


def _expected_minor(poly_ring, coefficients: dict):
    return poly_ring.from_dict({m: grat(c) for m, c in coefficients.items()})


@_check("flag_pipeline")
def check_flag(order: int) -> dict:
    su3 = parse_diagram("SU3", "1,2")
    chart = coordinate_chart(su3)
    gram = gram_matrix(chart.Z)
    poly_ring = chart.Z.ring
    _expect(admissible_minor(gram, 1) == _expected_minor(poly_ring, SU3_DELTA_1), "flag: SU(3) Delta_1 differs")
    _expect(admissible_minor(gram, 2) == _expected_minor(poly_ring, SU3_DELTA_2), "flag: SU(3) Delta_2 differs")
    nilpotency = {}
    for group, rank in (("Sp3", 3), ("SO7", 3), ("SO8", 4)):
        for r in range(1, rank + 1):
            diagram = parse_diagram(group, (r,))
            k = check_nilpotency(coordinate_chart(diagram).Z)
            _expect(k <= 3, f"flag: Z^3 != 0 for {diagram.label}")
            nilpotency[diagram.label] = k
    certificates = {}
    for group in ("Sp3", "SO7", "SO8"):
        diagram = parse_diagram(group, (2,))
        certificate = no_cancellation_check(diagram)
        scan = forbidden_23_scan(coordinate_chart(diagram), 2)
        _expect(bool(scan.monomials), f"flag: no (2,3) monomial for {diagram.label}")
        certificates[diagram.label] = {
            "case": diagram.lemma_case,
            "entry_coefficient": str(certificate.entry_coefficient),
            "monomials_23": len(scan.monomials),
        }
    return {"nilpotency": nilpotency, "lemma_cases": certificates}


@_check("u21_blowup", refutes=True)
def check_u21(order: int) -> dict:
    report = u21_report()
    _expect(report.h_matches, "u21: h along the line differs from P/Q")
    _expect(report.h_at_zero == 3, f"u21: h(0) = {report.h_at_zero}")
    _expect(
        report.k_p_exponent == U21_K_P_EXPONENT,
        f"u21: denominator of K is P^{report.k_p_exponent}, expected P^{U21_K_P_EXPONENT}",
    )
    _expect(report.r_degree == U21_R_DEGREE, f"u21: deg R = {report.r_degree}")
    witness = report.witness
    _expect(witness is not None and witness.divergence, "u21: no divergence certificate")
    _expect(witness.width <= BISECTION_WIDTH and 0 < witness.x0_low and witness.x0_high < 1, "u21: bad x0 bracket")
    return report.as_dict()["checks"]


@_check("ricci_duality")
def check_ricci(order: int) -> dict:
    disc = _ball(1)
    hyperbolic = normalize_diastasis(-series_log(HermSeries.radial((1, -1), order)))
    targets = {
        "CH1": hyperbolic,
        "g mu=1": ch_potential(CHDomain(disc, 1), PotentialKind.G, order).diastasis,
        "ghat mu=2": ch_potential(CHDomain(disc, 2), PotentialKind.GHAT, order).diastasis,
    }
    for d in targets.values():
        ricci_duality_check(d, order)
    scalar_duality_check(hyperbolic, order)
    ball2 = targets["g mu=1"]
    _expect(not ke_defect(ball2, 3, order), "ricci: CH2 is not KE with constant -3")
    lambdas = [Fraction(k, 2) for k in range(1, 11)]
    for mu in (Fraction(1, 2), Fraction(1), Fraction(2)):
        d = ch_potential(CHDomain(disc, mu), PotentialKind.GHAT, order).diastasis
        for lam in lambdas:
            _expect(bool(ke_defect(d, lam, order)), f"ricci: ghat mu={mu} KE at lambda={lam}")
    return {"duality": sorted(targets), "ke_grid": [str(lam) for lam in lambdas]}


@_check("ode_residual")
def check_ode(order: int) -> dict:
    out = {}
    for gamma, mu, n in ((2, 1, 1), (4, Fraction(4, 5), 4)):
        residual = ode_residual(gamma, mu, n, order=8)
        _expect(not residual.constant, f"ode: ratio constant for gamma={gamma} mu={mu} n={n}")
        out[f"{gamma},{mu},{n}"] = residual.as_dict()["certificate"]
    return out


@_check("product_arithmetic")
def check_products(order: int) -> dict:
    disc = _ball(1)
    ke = ProductDomain((disc, disc), (Fraction(2, 3), Fraction(2, 3)))
    plain = ProductDomain((disc, disc), (Fraction(1), Fraction(1)))
    _expect(csc_sum(ke) == 0, f"products: csc sum at mu_KE is {csc_sum(ke)}")
    _expect(csc_sum(plain) == 2, f"products: csc sum at (1,1) is {csc_sum(plain)}")
    grid = {
        (1, (1, 2)): True,
        (2, (3,)): True,
        (1, (1, Fraction(1, 2))): False,
        (Fraction(1, 2), (1,)): False,
        (3, (Fraction(4, 3), 1)): False,
    }
    for (alpha, mus), expected in grid.items():
        verdict = decide_dual_finite(alpha, tuple(Fraction(m) for m in mus)).verdict
        _expect(verdict == expected, f"products: decide dual alpha={alpha} mu={mus} gave {verdict}")
    return {"csc_at_ke": "0", "csc_at_ones": "2", "dual_grid": len(grid)}


def run_check(name: str, order: int, timings: bool = False) -> CheckResult:
    try:
        function, refutes = CHECKS[name]
    except KeyError as exc:
        raise VerificationError(f"verify: unknown check {name!r}, known {sorted(CHECKS)}") from exc
    started = time.perf_counter()
    try:
        witness = function(order)
        status = Status.REFUTED_AS_EXPECTED if refutes else Status.PASS
    except (VerificationError,) + MODULE_ERRORS as exc:
        witness = {"error": f"{type(exc).__name__}: {exc}"}
        status = Status.FAIL
    seconds = time.perf_counter() - started if timings else None
    if gvd:
        ic(name, status)
    return CheckResult(name=name, status=status, witness=witness, seconds=seconds)


def run_suite(
    order: int = DEFAULT_SUITE_ORDER,
    only: Sequence[str] | None = None,
    timings: bool = False,
) -> RunReport:
    names = list(CHECKS) if not only else list(only)
    checks = tuple(run_check(name, order, timings=timings) for name in names)
    return RunReport(suite=SUITE_NAME, order=order, checks=checks)

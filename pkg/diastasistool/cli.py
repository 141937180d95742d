#!/usr/bin/env python3
# tab-width:4

from __future__ import annotations

import json
import sys
from fractions import Fraction

import click
from asserttool import ic
from click_auto_help import AHGroup
from clicktool import CONTEXT_SETTINGS
from clicktool import click_add_options
from clicktool import click_global_options
from clicktool import tvicgvd
from configtool import get_config_directory
from globalverbose import gvd

from .CalabiAnalysis import dual_diastasis
from .CalabiAnalysis import projective_witness
from .CalabiAnalysis import scan_forbidden
from .CartanDomain import ProductDomain
from .CartanDomain import parse_domain
from .CartanDomain import wallach_member
from .CHMetrics import CHDomain
from .CHMetrics import PotentialKind
from .CHMetrics import ch_potential
from .CHMetrics import rank1_compactification_check
from .CHMetrics import verify_block_structure
from .Curvature import U21_K_P_EXPONENT
from .Curvature import U21_R_DEGREE
from .Curvature import CurvatureError
from .Curvature import ke_defect
from .Curvature import ricci_duality_check
from .Curvature import ricci_series
from .Curvature import u21_report
from .FlagManifold import FLAG_ORDER
from .FlagManifold import admissible_minor
from .FlagManifold import coordinate_chart
from .FlagManifold import flag_dual_verdict
from .FlagManifold import format_polynomial
from .FlagManifold import forbidden_23_scan
from .FlagManifold import gram_matrix
from .FlagManifold import no_cancellation_check
from .FlagManifold import parse_diagram
from .GRat import GRatError
from .GRat import parse_rational
from .HermSeries import DEFAULT_ORDER
from .Inducibility import decide
from .Inducibility import dual_refutation
from .Inducibility import minimal_alpha
from .VerificationSuite import CHECKS
from .VerificationSuite import DEFAULT_SUITE_ORDER
from .VerificationSuite import MODULE_ERRORS
from .VerificationSuite import VerificationError
from .VerificationSuite import run_suite

APP_NAME = "diastasistool"
MAX_ORDER = 16      # upper bound accepted for --order
LAST_VERIFY = "last_verify.json"

METRIC_KINDS = {
    "g": PotentialKind.G,
    "ghat": PotentialKind.GHAT,
    "dual_g": PotentialKind.G_STAR,
    "dual_ghat": PotentialKind.GHAT_STAR,
    "g_star": PotentialKind.G_STAR,
    "ghat_star": PotentialKind.GHAT_STAR,
}


class RationalType(click.ParamType):
    name = "p/q"

    def convert(self, value, param, ctx):
        if isinstance(value, Fraction):
            return value
        try:
            return parse_rational(value)
        except GRatError as exc:
            self.fail(str(exc), param, ctx)


RATIONAL = RationalType()

order_option = [
    click.option(
        "--order",
        type=click.IntRange(2, MAX_ORDER),
        default=DEFAULT_ORDER,
        show_default=True,
        help="Truncation total degree",
    ),
]
json_option = [
    click.option("--json", "as_json", is_flag=True, help="Emit JSON on stdout"),
]
metric_options = [
    click.option("--domain", type=str, required=True, help="CHn:3, I:2x2, prod:[CH1,CH1]:mu=[1,2]"),
    click.option("--metric", type=click.Choice(sorted(METRIC_KINDS)), default="g", show_default=True),
    click.option("--alpha", type=RATIONAL, default="1", show_default=True),
    click.option("--mu", type=RATIONAL, default=None, help="Fiber exponent; taken from the descriptor for products"),
]
diagram_options = [
    click.option("--group", type=str, required=True, help="SU3, Sp3, SO7, SO8"),
    click.option("--black", type=str, required=True, help="Black nodes, 1-based, e.g. 1,2"),
]


def _error(message: str) -> None:
    print(f"[ERROR] {message}", file=sys.stderr)
    sys.exit(1)


def _info(message: str) -> None:
    print(f"[INFO] {message}", file=sys.stderr)


def _emit(payload: dict, as_json: bool, lines: list[str]) -> None:
    if as_json:
        print(json.dumps(payload, sort_keys=True))
        return
    for line in lines:
        print(line)


def _ch_domain(domain: str, mu: Fraction | None) -> CHDomain:
    base = parse_domain(domain)
    return CHDomain.over(base, mu)


def _diastasis(domain: str, metric: str, alpha: Fraction, mu: Fraction | None, order: int):
    d = _ch_domain(domain, mu)
    return ch_potential(d, METRIC_KINDS[metric], order).diastasis.scale(alpha)


def _coefficient_lines(series) -> list[str]:
    return [
        f"{entry['I']} {entry['J']}  {entry['c']}"
        for entry in series.to_json()["coefficients"]
    ]


@click.group(
    context_settings=CONTEXT_SETTINGS,
    no_args_is_help=True,
    cls=AHGroup,
)
@click_add_options(click_global_options)
@click.pass_context
def cli(
    ctx: click.Context,
    verbose_inf: bool,
    dict_output: bool,
    verbose: bool = False,
) -> None:
    tty, verbose = tvicgvd(
        ctx=ctx,
        verbose=verbose,
        verbose_inf=verbose_inf,
        ic=ic,
        gvd=gvd,
    )
    config_directory = get_config_directory(click_instance=click, app_name=APP_NAME)
    config_directory.mkdir(exist_ok=True)
    ctx.obj["config_directory"] = config_directory


@cli.command()
@click.option("--domain", type=str, required=True)
@click.option("--point", type=RATIONAL, default=None, help="Test one point for membership")
@click_add_options(json_option)
@click_add_options(click_global_options)
@click.pass_context
def wallach(
    ctx: click.Context,
    domain: str,
    point: Fraction | None,
    as_json: bool,
    verbose_inf: bool,
    dict_output: bool,
    verbose: bool = False,
) -> None:
    """
    Structural constants and Wallach set of a Cartan domain.
    """
    _tty, _verbose = tvicgvd(ctx=ctx, verbose=verbose, verbose_inf=verbose_inf, ic=ic, gvd=gvd)
    try:
        parsed = parse_domain(domain)
        factors = parsed.factors if isinstance(parsed, ProductDomain) else (parsed,)
        records = [factor.as_dict() for factor in factors]
        if point is not None:
            for factor, record in zip(factors, records):
                record["member"] = wallach_member(factor.wallach, point)
    except MODULE_ERRORS as exc:
        _error(str(exc))
    lines = [f"{r['label']}  r={r['r']} a={r['a']} b={r['b']} n={r['n']} gamma={r['gamma']}  W={r['wallach']}"
             + (f"  {point} in W: {r['member']}" if point is not None else "") for r in records]
    _emit({"domains": records}, as_json, lines)


@cli.command("decide")
@click_add_options(metric_options)
@click_add_options(order_option)
@click_add_options(json_option)
@click_add_options(click_global_options)
@click.pass_context
def decide_command(
    ctx: click.Context,
    domain: str,
    metric: str,
    alpha: Fraction,
    mu: Fraction | None,
    order: int,
    as_json: bool,
    verbose_inf: bool,
    dict_output: bool,
    verbose: bool = False,
) -> None:
    """
    Decide projective inducibility of alpha times a Cartan-Hartogs metric.
    """
    _tty, _verbose = tvicgvd(ctx=ctx, verbose=verbose, verbose_inf=verbose_inf, ic=ic, gvd=gvd)
    kind = METRIC_KINDS[metric]
    try:
        base = parse_domain(domain)
        decision = decide(base, kind, alpha, mu)
        least = minimal_alpha(base, mu, kind)
        refutation = None
        if kind.is_dual and not decision.verdict and not isinstance(base, ProductDomain):
            refutation = dual_refutation(alpha, mu, kind, order)
    except MODULE_ERRORS as exc:
        _error(str(exc))
    payload = {
        "domain": domain,
        "metric": kind.value,
        "alpha": str(alpha),
        "mu": None if mu is None else str(mu),
        "decision": decision.as_dict(),
        "minimal_alpha": least,
        "refutation": None if refutation is None else refutation.as_dict(),
    }
    lines = [f"verdict: {decision.verdict}  ({decision.rule.value})"]
    if decision.failing is not None:
        lines.append(f"failing: {decision.failing[0]} value {decision.failing[1]}")
    lines.append(f"minimal integer alpha: {least}")
    if refutation is not None:
        witness = refutation.witness
        lines.append(
            f"witness: {refutation.route}, degree {witness.first_negative}, "
            f"coefficient {witness.first_negative_value}"
        )
    _emit(payload, as_json, lines)


@cli.command()
@click_add_options(metric_options)
@click_add_options(order_option)
@click_add_options(json_option)
@click_add_options(click_global_options)
@click.pass_context
def expand(
    ctx: click.Context,
    domain: str,
    metric: str,
    alpha: Fraction,
    mu: Fraction | None,
    order: int,
    as_json: bool,
    verbose_inf: bool,
    dict_output: bool,
    verbose: bool = False,
) -> None:
    """
    Diastasis series of alpha times a Cartan-Hartogs potential, with the
    Calabi matrix verdict at half the order.
    """
    _tty, _verbose = tvicgvd(ctx=ctx, verbose=verbose, verbose_inf=verbose_inf, ic=ic, gvd=gvd)
    try:
        d = _diastasis(domain, metric, alpha, mu, order)
        projective = projective_witness(d, order // 2)
    except MODULE_ERRORS as exc:
        _error(str(exc))
    payload = {"series": d.series.to_json(), "projective": projective.as_dict()}
    lines = _coefficient_lines(d.series) + [f"calabi matrix: {projective.verdict.value} (basis norm <= {order // 2})"]
    _emit(payload, as_json, lines)


@cli.command()
@click_add_options(metric_options)
@click_add_options(order_option)
@click_add_options(json_option)
@click_add_options(click_global_options)
@click.pass_context
def dual(
    ctx: click.Context,
    domain: str,
    metric: str,
    alpha: Fraction,
    mu: Fraction | None,
    order: int,
    as_json: bool,
    verbose_inf: bool,
    dict_output: bool,
    verbose: bool = False,
) -> None:
    """
    Dual diastasis -D(z, -zbar) of a Cartan-Hartogs potential.
    """
    _tty, _verbose = tvicgvd(ctx=ctx, verbose=verbose, verbose_inf=verbose_inf, ic=ic, gvd=gvd)
    try:
        d = dual_diastasis(_diastasis(domain, metric, alpha, mu, order))
    except MODULE_ERRORS as exc:
        _error(str(exc))
    _emit({"series": d.series.to_json()}, as_json, _coefficient_lines(d.series))


@cli.command()
@click_add_options(metric_options)
@click_add_options(order_option)
@click_add_options(json_option)
@click_add_options(click_global_options)
@click.pass_context
def forbidden(
    ctx: click.Context,
    domain: str,
    metric: str,
    alpha: Fraction,
    mu: Fraction | None,
    order: int,
    as_json: bool,
    verbose_inf: bool,
    dict_output: bool,
    verbose: bool = False,
) -> None:
    """
    Forbidden monomials of a Cartan-Hartogs diastasis.
    """
    _tty, _verbose = tvicgvd(ctx=ctx, verbose=verbose, verbose_inf=verbose_inf, ic=ic, gvd=gvd)
    try:
        found = scan_forbidden(_diastasis(domain, metric, alpha, mu, order))
    except MODULE_ERRORS as exc:
        _error(str(exc))
    lines = [f"{f.left} {f.right}  kind {f.kind}  {f.as_dict()['c']}" for f in found]
    if not found:
        lines = [f"no forbidden monomial through order {order}"]
    _emit({"order": order, "forbidden": [f.as_dict() for f in found]}, as_json, lines)


@cli.group(
    context_settings=CONTEXT_SETTINGS,
    no_args_is_help=True,
    cls=AHGroup,
)
def flag() -> None:
    """
    Flag manifolds: admissible minors and the dual verdict.
    """


@flag.command()
@click_add_options(diagram_options)
@click_add_options(json_option)
@click_add_options(click_global_options)
@click.pass_context
def minors(
    ctx: click.Context,
    group: str,
    black: str,
    as_json: bool,
    verbose_inf: bool,
    dict_output: bool,
    verbose: bool = False,
) -> None:
    """
    Coordinate chart and Delta_r for every black node r.
    """
    _tty, _verbose = tvicgvd(ctx=ctx, verbose=verbose, verbose_inf=verbose_inf, ic=ic, gvd=gvd)
    try:
        diagram = parse_diagram(group, black)
        chart = coordinate_chart(diagram)
        gram = gram_matrix(chart.Z)
        deltas = {r: admissible_minor(gram, r) for r in diagram.black}
    except MODULE_ERRORS as exc:
        _error(str(exc))
    payload = {
        "diagram": diagram.label,
        "chart": chart.as_dict(),
        "Z": chart.Z.as_strings(),
        "minors": {str(r): format_polynomial(delta) for r, delta in deltas.items()},
    }
    lines = [f"Delta_{r} = {format_polynomial(delta)}" for r, delta in deltas.items()]
    _emit(payload, as_json, lines)


@flag.command()
@click_add_options(diagram_options)
@click.option("--coefficients", type=str, default=None, help="c_j per black node, default all 1")
@click.option("--order", type=click.IntRange(2, MAX_ORDER), default=FLAG_ORDER, show_default=True)
@click_add_options(json_option)
@click_add_options(click_global_options)
@click.pass_context
def verdict(
    ctx: click.Context,
    group: str,
    black: str,
    coefficients: str | None,
    order: int,
    as_json: bool,
    verbose_inf: bool,
    dict_output: bool,
    verbose: bool = False,
) -> None:
    """
    Does sum c_j log Delta_{r_j} admit a Kaehler dual through order?
    """
    _tty, _verbose = tvicgvd(ctx=ctx, verbose=verbose, verbose_inf=verbose_inf, ic=ic, gvd=gvd)
    try:
        diagram = parse_diagram(group, black)
        if coefficients is None:
            values = tuple(Fraction(1) for _ in diagram.black)
        else:
            values = tuple(parse_rational(part) for part in coefficients.split(","))
        result = flag_dual_verdict(diagram, values, order)
    except MODULE_ERRORS + (GRatError,) as exc:
        _error(str(exc))
    record = result.as_dict()
    lines = [f"{record['diagram']}: {record['verdict']}  ({record['forbidden_count']} forbidden)"]
    if result.witness is not None:
        lines.append(f"witness: {result.witness.left} {result.witness.right} kind {result.witness.kind}")
    _emit(record, as_json, lines)


@flag.command()
@click_add_options(diagram_options)
@click_add_options(json_option)
@click_add_options(click_global_options)
@click.pass_context
def lemma(
    ctx: click.Context,
    group: str,
    black: str,
    as_json: bool,
    verbose_inf: bool,
    dict_output: bool,
    verbose: bool = False,
) -> None:
    """
    The +1/2 monomial certificate and the (2,3) template scan.
    """
    _tty, _verbose = tvicgvd(ctx=ctx, verbose=verbose, verbose_inf=verbose_inf, ic=ic, gvd=gvd)
    try:
        diagram = parse_diagram(group, black)
        certificate = no_cancellation_check(diagram)
        scan = forbidden_23_scan(coordinate_chart(diagram), certificate.r)
    except MODULE_ERRORS as exc:
        _error(str(exc))
    payload = {"certificate": certificate.as_dict(), "scan": scan.as_dict()}
    lines = [
        f"{diagram.label}: case {diagram.lemma_case}, entry coefficient {certificate.entry_coefficient}",
        f"(2,3) monomials: {len(scan.monomials)}, every one matched by a template",
    ]
    _emit(payload, as_json, lines)


@cli.group(
    context_settings=CONTEXT_SETTINGS,
    no_args_is_help=True,
    cls=AHGroup,
)
def curvature() -> None:
    """
    Curvature along curves and series-level Ricci potentials.
    """


@curvature.command("hideyuki")
@click.option(
    "--check",
    type=click.Choice(["h", "k", "blowup", "all"]),
    default="all",
    show_default=True,
)
@click_add_options(json_option)
@click_add_options(click_global_options)
@click.pass_context
def u21(
    ctx: click.Context,
    check: str,
    as_json: bool,
    verbose_inf: bool,
    dict_output: bool,
    verbose: bool = False,
) -> None:
    """
    Metric and Gaussian curvature of the U(2,1) dual along the line z = (1 + i/2) x.
    """
    _tty, _verbose = tvicgvd(ctx=ctx, verbose=verbose, verbose_inf=verbose_inf, ic=ic, gvd=gvd)
    _info("expanding log det A* along the curve")
    try:
        report = u21_report(blowup=check in ("blowup", "all"))
    except MODULE_ERRORS as exc:
        _error(str(exc))
    flags = {
        "h": report.h_matches and report.h_at_zero == 3,
        "k": report.k_p_exponent == U21_K_P_EXPONENT and report.r_degree == U21_R_DEGREE,
        "blowup": report.witness is not None and report.witness.divergence,
    }
    selected = list(flags) if check == "all" else [check]
    payload = report.as_dict()
    payload["flags"] = {name: flags[name] for name in selected}
    lines = [f"{name}: {'pass' if flags[name] else 'fail'}" for name in selected]
    if report.witness is not None:
        lines.append(f"x0 in [{report.witness.x0_low}, {report.witness.x0_high}]")
    _emit(payload, as_json, lines)
    if not all(flags[name] for name in selected):
        sys.exit(1)


curvature.add_command(u21, name="u21")


@curvature.command()
@click_add_options(metric_options)
@click.option("--lambda", "lam", type=RATIONAL, default=None, help="Report the KE defect for this constant")
@click_add_options(order_option)
@click_add_options(json_option)
@click_add_options(click_global_options)
@click.pass_context
def ricci(
    ctx: click.Context,
    domain: str,
    metric: str,
    alpha: Fraction,
    mu: Fraction | None,
    lam: Fraction | None,
    order: int,
    as_json: bool,
    verbose_inf: bool,
    dict_output: bool,
    verbose: bool = False,
) -> None:
    """
    Ricci potential log det of the Hessian, its duality check, and the KE defect.
    """
    _tty, _verbose = tvicgvd(ctx=ctx, verbose=verbose, verbose_inf=verbose_inf, ic=ic, gvd=gvd)
    try:
        d = _diastasis(domain, metric, alpha, mu, order)
        ricci_potential = ricci_series(d, order).potential
        defect = None if lam is None else ke_defect(d, lam, order)
    except MODULE_ERRORS as exc:
        _error(str(exc))
    try:
        ricci_duality_check(d, order)
        duality = True
    except CurvatureError as exc:
        print(f"[WARNING] {exc}", file=sys.stderr)
        duality = False
    payload = {
        "ricci": ricci_potential.series.to_json(),
        "duality": duality,
        "ke_defect": None if defect is None else defect.to_json(),
    }
    lines = _coefficient_lines(ricci_potential.series) + [f"duality: {duality}"]
    if defect is not None:
        lines.append(f"KE with constant -{lam}: {not defect}")
    _emit(payload, as_json, lines)
    if not duality:
        sys.exit(1)


@cli.group(
    context_settings=CONTEXT_SETTINGS,
    no_args_is_help=True,
    cls=AHGroup,
)
def ch() -> None:
    """
    Cartan-Hartogs potentials and their structural checks.
    """


@ch.command()
@click.option("--base", type=str, required=True)
@click.option("--mu", type=RATIONAL, default=None)
@click.option("--kind", type=click.Choice(sorted(METRIC_KINDS)), default="g", show_default=True)
@click_add_options(order_option)
@click_add_options(json_option)
@click_add_options(click_global_options)
@click.pass_context
def potential(
    ctx: click.Context,
    base: str,
    mu: Fraction | None,
    kind: str,
    order: int,
    as_json: bool,
    verbose_inf: bool,
    dict_output: bool,
    verbose: bool = False,
) -> None:
    """
    Diastasis of g, ghat, g_star or ghat_star.
    """
    _tty, _verbose = tvicgvd(ctx=ctx, verbose=verbose, verbose_inf=verbose_inf, ic=ic, gvd=gvd)
    try:
        d = _diastasis(base, kind, Fraction(1), mu, order)
    except MODULE_ERRORS as exc:
        _error(str(exc))
    _emit({"series": d.series.to_json()}, as_json, _coefficient_lines(d.series))


@ch.command()
@click.option("--base", type=str, required=True)
@click.option("--mu", type=RATIONAL, default=None)
@click.option("--kind", type=click.Choice(["g", "ghat"]), default="ghat", show_default=True)
@click.option("--alpha", type=RATIONAL, default="1", show_default=True)
@click.option("--order", type=click.IntRange(1, MAX_ORDER // 2), default=3, show_default=True, help="Basis norm")
@click_add_options(json_option)
@click_add_options(click_global_options)
@click.pass_context
def blocks(
    ctx: click.Context,
    base: str,
    mu: Fraction | None,
    kind: str,
    alpha: Fraction,
    order: int,
    as_json: bool,
    verbose_inf: bool,
    dict_output: bool,
    verbose: bool = False,
) -> None:
    """
    Block-diagonal Calabi matrix of g or ghat, fiber blocks included.
    """
    _tty, _verbose = tvicgvd(ctx=ctx, verbose=verbose, verbose_inf=verbose_inf, ic=ic, gvd=gvd)
    try:
        p = ch_potential(_ch_domain(base, mu), METRIC_KINDS[kind], 2 * order)
        report = verify_block_structure(p, order, alpha=alpha)
    except MODULE_ERRORS as exc:
        _error(str(exc))
    lines = [f"cross blocks zero through basis norm {order}"] + [
        f"F_z(0),w({s}) = {c}" for s, c in enumerate(report.fiber_coefficients, start=1)
    ]
    _emit(report.as_dict(), as_json, lines)


@ch.command()
@click.option("--mu", type=click.IntRange(1, None), required=True)
@click.option("--order", type=click.IntRange(2, MAX_ORDER), default=8, show_default=True)
@click_add_options(json_option)
@click_add_options(click_global_options)
@click.pass_context
def compactify(
    ctx: click.Context,
    mu: int,
    order: int,
    as_json: bool,
    verbose_inf: bool,
    dict_output: bool,
    verbose: bool = False,
) -> None:
    """
    Veronese compactification of the dual of the disc-based ghat.
    """
    _tty, _verbose = tvicgvd(ctx=ctx, verbose=verbose, verbose_inf=verbose_inf, ic=ic, gvd=gvd)
    try:
        report = rank1_compactification_check(mu, order=order)
    except MODULE_ERRORS as exc:
        _error(str(exc))
    lines = [f"weights C({mu},k): {list(report.veronese_weights)}", "pulled-back potential equals ghat_star"]
    _emit(report.as_dict(), as_json, lines)


@cli.command("verify-paper")
@click.option(
    "--order",
    type=click.IntRange(4, MAX_ORDER),
    default=DEFAULT_SUITE_ORDER,
    show_default=True,
)
@click.option("--check", "only", type=click.Choice(list(CHECKS)), multiple=True, help="Run only these checks")
@click.option("--timings", is_flag=True, help="Add wall time per check")
@click_add_options(json_option)
@click_add_options(click_global_options)
@click.pass_context
def verify(
    ctx: click.Context,
    order: int,
    only: tuple[str, ...],
    timings: bool,
    as_json: bool,
    verbose_inf: bool,
    dict_output: bool,
    verbose: bool = False,
) -> None:
    """
    Run the acceptance suite and store the report in the config directory.
    """
    _tty, _verbose = tvicgvd(ctx=ctx, verbose=verbose, verbose_inf=verbose_inf, ic=ic, gvd=gvd)
    try:
        report = run_suite(order=order, only=only, timings=timings)
    except VerificationError as exc:
        _error(str(exc))
    payload = report.as_dict()
    text = json.dumps(payload, sort_keys=True)
    destination = ctx.obj["config_directory"] / LAST_VERIFY
    destination.write_text(text + "\n")
    _info(f"report written to {destination}")
    lines = [f"{check.name:20} {check.status.value}" for check in report.checks]
    lines.append("PASS" if report.passed else f"FAIL: {', '.join(report.failures)}")
    _emit(payload, as_json, lines)
    if not report.passed:
        sys.exit(1)


cli.add_command(verify, name="verify")

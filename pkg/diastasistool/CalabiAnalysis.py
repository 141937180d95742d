#!/usr/bin/env python3
# tab-width:4

"""
CalabiAnalysis - diastasis normal form, the dual trick, forbidden monomials,
and Calabi's criterion as an exact coefficient-matrix test.

A diastasis is a real potential with no purely holomorphic or purely
antiholomorphic terms. Its dual is  D*(z, zbar) = -D(z, -zbar), which is
real exactly when every stored a_IJ has |I| and |J| of equal parity; a term
that breaks parity is a forbidden monomial.

Calabi's criterion says D is projectively induced iff the Hermitian matrix
B_jk of  e^D - 1 = sum B_jk z^{m_j} zbar^{m_k}  is positive semidefinite.
Only a finite corner of B is ever known, so the matrix test can refute
(an exact negative pivot or principal minor is a proof) but never confirm:
a clean pass is reported as consistency up to the order examined.
"""

from __future__ import annotations

from dataclasses import dataclass
from dataclasses import field
from enum import Enum
from fractions import Fraction

from asserttool import ic
from globalverbose import gvd

from .GRat import GRat
from .GRat import conjugate_grat
from .GRat import format_grat
from .GRat import real_part
from .GRat import to_fraction
from .HermSeries import HermSeries
from .HermSeries import MultiIndex
from .HermSeries import series_exp
from .HermSeries import substitute_negate_bar


class CalabiError(ValueError):
    """
    The potential cannot support a Calabi analysis.

    Non-hermitian input, a missing normal form, or a dual requested for a
    potential that carries forbidden monomials.
    """


class Verdict(Enum):
    REFUTED = "REFUTED"
    CONSISTENT_UP_TO = "CONSISTENT_UP_TO"


@dataclass(frozen=True)
class Diastasis:
    series: HermSeries

    def __post_init__(self):
        for (left, right), _ in self.series.items():
            if not sum(left) or not sum(right):
                raise CalabiError(
                    f"diastasis: term {list(left)}{list(right)} violates a_I0 = a_0J = 0"
                )
        if not self.series.is_hermitian():
            raise CalabiError("diastasis: series is not real-valued")

    @property
    def nvars(self) -> int:
        return self.series.nvars

    @property
    def order(self) -> int:
        return self.series.order

    def scale(self, factor) -> Diastasis:
        factor = to_fraction(factor)
        return Diastasis(self.series.scale(factor))

    def __add__(self, other: Diastasis) -> Diastasis:
        return Diastasis(self.series + other.series)


@dataclass(frozen=True)
class ForbiddenMonomial:
    left: MultiIndex
    right: MultiIndex
    coefficient: GRat

    @property
    def kind(self) -> tuple[int, int]:
        return sum(self.left), sum(self.right)

    def as_dict(self) -> dict:
        return {
            "I": list(self.left),
            "J": list(self.right),
            "kind": list(self.kind),
            "c": format_grat(self.coefficient),
        }


def normalize_diastasis(potential: HermSeries) -> Diastasis:
    """Drop the holomorphic and antiholomorphic parts of a real potential."""
    if not potential.is_hermitian():
        raise CalabiError("normalize diastasis: potential is not real-valued")
    kept = {
        (left, right): value
        for (left, right), value in potential.items()
        if sum(left) and sum(right)
    }
    return Diastasis(HermSeries._raw(potential.nvars, potential.order, kept))


def scan_forbidden(d: Diastasis | HermSeries) -> list[ForbiddenMonomial]:
    series = d.series if isinstance(d, Diastasis) else d
    found = [
        ForbiddenMonomial(left, right, value)
        for (left, right), value in series.items()
        if (sum(left) - sum(right)) % 2
    ]
    return found


def has_kahler_dual(d: Diastasis) -> bool:
    """True when no forbidden monomial is stored; evidence up to d.order only."""
    return not scan_forbidden(d)


def dual_diastasis(d: Diastasis) -> Diastasis:
    """D*(z, zbar) = -D(z, -zbar), coefficientwise a*_IJ = -(-1)^|J| a_IJ."""
    forbidden = scan_forbidden(d)
    if forbidden:
        first = forbidden[0]
        raise CalabiError(
            f"dual diastasis: forbidden monomial of kind {first.kind} "
            f"({format_grat(first.coefficient)}) makes the dual non-real"
        )
    return Diastasis(-substitute_negate_bar(d.series))


def _multi_indices(nvars: int, norm: int) -> list[MultiIndex]:
    if nvars == 1:
        return [(norm,)]
    out = []
    for head in range(norm, -1, -1):
        for tail in _multi_indices(nvars - 1, norm - head):
            out.append((head,) + tail)
    return out


def monomial_basis(nvars: int, top: int) -> list[MultiIndex]:
    """Nonzero multi-indices of norm <= top, by norm then descending exponent vector."""
    basis = []
    for norm in range(1, top + 1):
        basis.extend(_multi_indices(nvars, norm))
    return basis


@dataclass(frozen=True)
class CalabiMatrix:
    basis: tuple[MultiIndex, ...]
    entries: tuple[tuple[GRat, ...], ...]
    norm_blocks: dict[int, tuple[int, ...]]
    fiber: int | None = None                    # slot of the distinguished fiber variable w
    fiber_blocks: dict[tuple[int, int], tuple[int, ...]] = field(default_factory=dict)

    @property
    def size(self) -> int:
        return len(self.basis)

    def entry(self, row: MultiIndex, column: MultiIndex) -> GRat:
        return self.entries[self.basis.index(row)][self.basis.index(column)]

    def submatrix(self, indices: tuple[int, ...]) -> tuple[tuple[GRat, ...], ...]:
        return tuple(tuple(self.entries[i][j] for j in indices) for i in indices)

    def block_of(self, index: int) -> tuple[int, int] | int:
        monomial = self.basis[index]
        if self.fiber is None:
            return sum(monomial)
        return sum(monomial) - monomial[self.fiber], monomial[self.fiber]

    def cross_block_entries(self) -> list[tuple[int, int, GRat]]:
        """Nonzero entries joining two different blocks."""
        found = []
        for i, row in enumerate(self.entries):
            for j, value in enumerate(row):
                if value and self.block_of(i) != self.block_of(j):
                    found.append((i, j, value))
        return found

    def is_hermitian(self) -> bool:
        return all(
            self.entries[i][j] == conjugate_grat(self.entries[j][i])
            for i in range(self.size)
            for j in range(i, self.size)
        )


def calabi_matrix(
    d: Diastasis,
    order: int,
    fiber: int | None = None,
) -> CalabiMatrix:
    """B_jk for every basis monomial of norm <= order; needs d through 2*order."""
    if d.order < 2 * order:
        raise CalabiError(
            f"calabi matrix: basis norm {order} needs the diastasis through order {2 * order}, "
            f"have {d.order}"
        )
    if fiber is not None and not 0 <= fiber < d.nvars:
        raise CalabiError(f"calabi matrix: fiber slot {fiber} outside {d.nvars} variables")
    excess = series_exp(d.series.truncate(2 * order)) - 1
    basis = tuple(monomial_basis(d.nvars, order))
    entries = tuple(tuple(excess.coefficient(row, column) for column in basis) for row in basis)
    norm_blocks: dict[int, list[int]] = {}
    fiber_blocks: dict[tuple[int, int], list[int]] = {}
    for index, monomial in enumerate(basis):
        norm_blocks.setdefault(sum(monomial), []).append(index)
        if fiber is not None:
            key = (sum(monomial) - monomial[fiber], monomial[fiber])
            fiber_blocks.setdefault(key, []).append(index)
    if gvd:
        ic(len(basis), len(excess))
    return CalabiMatrix(
        basis=basis,
        entries=entries,
        norm_blocks={k: tuple(v) for k, v in norm_blocks.items()},
        fiber=fiber,
        fiber_blocks={k: tuple(v) for k, v in sorted(fiber_blocks.items())},
    )


@dataclass(frozen=True)
class PsdWitness:
    indices: tuple[int, int]        # (j, j) negative pivot, (i, j) zero-diagonal 2x2 minor
    principal: tuple[int, ...]      # principal submatrix whose determinant is negative
    minor: Fraction                 # that determinant, exact
    value: Fraction                 # Schur-complement pivot (or 2x2 Schur determinant)


@dataclass(frozen=True)
class PsdVerdict:
    psd: bool
    rank: int
    pivot_order: tuple[int, ...]
    pivots: tuple[Fraction, ...]
    witness: PsdWitness | None


def _is_zero(value: GRat) -> bool:
    return not value


def psd_check(m: CalabiMatrix | tuple[tuple[GRat, ...], ...]) -> PsdVerdict:
    """
    Fraction-free symmetric elimination with largest-pivot diagonal selection.

    After k steps the diagonal entry of row i is the principal minor on the
    k chosen pivots plus i (Sylvester's identity), so a negative diagonal is
    a negative principal minor of the input. When only zero diagonals remain
    every remaining entry must vanish; a surviving off-diagonal b gives the
    2x2 principal minor -|b|^2 < 0.
    """
    entries = m.entries if isinstance(m, CalabiMatrix) else m
    size = len(entries)
    work = [list(row) for row in entries]
    for i in range(size):
        if work[i][i].y:
            raise CalabiError(f"psd check: diagonal entry {i} is not real")
    remaining = list(range(size))
    chosen: list[int] = []
    pivots: list[Fraction] = []
    previous = Fraction(1)
    previous_grat = None
    while remaining:
        best = max(remaining, key=lambda i: (real_part(work[i][i]), -i))
        top = real_part(work[best][best])
        if top <= 0:
            negatives = [i for i in remaining if real_part(work[i][i]) < 0]
            if negatives:
                first = negatives[0]
                minor = real_part(work[first][first])
                return PsdVerdict(
                    psd=False,
                    rank=len(chosen),
                    pivot_order=tuple(chosen),
                    pivots=tuple(pivots),
                    witness=PsdWitness(
                        indices=(first, first),
                        principal=tuple(sorted(chosen + [first])),
                        minor=minor,
                        value=minor / previous,
                    ),
                )
            for i in remaining:
                for j in remaining:
                    if i < j and not _is_zero(work[i][j]):
                        modulus = real_part(work[i][j] * work[j][i])
                        return PsdVerdict(
                            psd=False,
                            rank=len(chosen),
                            pivot_order=tuple(chosen),
                            pivots=tuple(pivots),
                            witness=PsdWitness(
                                indices=(i, j),
                                principal=tuple(sorted(chosen + [i, j])),
                                minor=-modulus / previous,
                                value=-modulus / (previous * previous),
                            ),
                        )
            break
        pivot = work[best][best]
        remaining.remove(best)
        for i in remaining:
            for j in remaining:
                updated = pivot * work[i][j] - work[i][best] * work[best][j]
                work[i][j] = updated if previous_grat is None else updated / previous_grat
        chosen.append(best)
        pivots.append(top / previous)
        previous = top
        previous_grat = pivot
    return PsdVerdict(
        psd=True,
        rank=len(chosen),
        pivot_order=tuple(chosen),
        pivots=tuple(pivots),
        witness=None,
    )


@dataclass(frozen=True)
class ProjectiveVerdict:
    verdict: Verdict
    order: int
    witness: PsdWitness | None
    basis: tuple[MultiIndex, ...]

    @property
    def refuted(self) -> bool:
        return self.verdict is Verdict.REFUTED

    @property
    def witness_monomials(self) -> tuple[MultiIndex, MultiIndex] | None:
        if self.witness is None:
            return None
        i, j = self.witness.indices
        return self.basis[i], self.basis[j]

    def as_dict(self) -> dict:
        record: dict = {"verdict": self.verdict.value, "order": self.order, "witness": None}
        if self.witness is not None:
            row, column = self.witness_monomials
            record["witness"] = {
                "index_pair": list(self.witness.indices),
                "monomials": [list(row), list(column)],
                "value": str(self.witness.value),
                "principal_minor": str(self.witness.minor),
            }
        return record


def projective_witness(
    d: Diastasis,
    order: int,
    fiber: int | None = None,
) -> ProjectiveVerdict:
    """Refute projective inducibility from the Calabi matrix through basis norm order."""
    matrix = calabi_matrix(d, order, fiber=fiber)
    verdict = psd_check(matrix)
    if gvd:
        ic(verdict.psd, verdict.rank, verdict.witness)
    return ProjectiveVerdict(
        verdict=Verdict.CONSISTENT_UP_TO if verdict.psd else Verdict.REFUTED,
        order=order,
        witness=verdict.witness,
        basis=matrix.basis,
    )


def radial_coefficients(d: Diastasis) -> list[GRat]:
    """One-variable e^D - 1 as coefficients of |z|^(2h), h >= 1."""
    if d.nvars != 1:
        raise CalabiError("radial coefficients: expected a one-variable diastasis")
    excess = series_exp(d.series) - 1
    return [excess.coefficient((h,), (h,)) for h in range(1, d.order // 2 + 1)]


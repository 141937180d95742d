#!/usr/bin/env python3
# tab-width:4

"""
CartanDomain - irreducible bounded symmetric domains by their structural
constants (r, a, b), products of them, and their Wallach sets.

    genus      gamma = (r - 1) a + b + 2
    dimension  n     = r + r (r - 1) a / 2 + r b
    Wallach    W     = {0, a/2, ..., (r - 1) a/2}  u  ((r - 1) a/2, oo)

b = 0 is allowed: the unit disc and the tube-type domains need it.

Sign convention: g_Omega = -i/2pi ddbar log N is Kaehler-Einstein with
Einstein constant -gamma; `einstein_constant` reports that negative value.

Descriptors accepted by parse_domain:
    CHn:3  CH3  ball:3  I:2x3  II:5  III:2  IV:4  EVI  EVII
    prod:[CH1,I:2x2]:mu=[1,1/2]
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .GRat import GRatError
from .GRat import parse_rational


class DomainError(ValueError):
    """
    The parameters do not describe a supported Cartan domain.

    Bad family sizes, inconsistent constants, malformed descriptors and
    series requests for catalog-only families all land here.
    """


class Family(Enum):
    BALL = "rank1-ball"
    I = "I"
    II = "II"
    III = "III"
    IV = "IV"
    EVI = "EVI"
    EVII = "EVII"


@dataclass(frozen=True)
class WallachSet:
    a: int
    r: int

    @property
    def threshold(self) -> Fraction:
        """(r - 1) a / 2, where the continuous part starts."""
        return Fraction((self.r - 1) * self.a, 2)

    @property
    def discrete(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(j * self.a, 2) for j in range(self.r))

    def describe(self) -> str:
        points = ", ".join(str(p) for p in self.discrete)
        return f"{{{points}}} u ({self.threshold}, oo)"


def wallach_member(
    w: WallachSet,
    x,
    exclude_zero: bool = False,
) -> bool:
    x = Fraction(x)
    if x < 0:
        raise DomainError(f"wallach: negative point {x}")
    if exclude_zero and x == 0:
        return False
    return x > w.threshold or x in w.discrete


@dataclass(frozen=True)
class CartanDomain:
    family: Family
    size: tuple[int, ...]
    r: int          # rank
    a: int
    b: int
    n: int          # complex dimension
    gamma: int      # genus

    def __post_init__(self):
        if self.r < 1 or self.a < 0 or self.b < 0:
            raise DomainError(f"cartan domain: bad constants r={self.r} a={self.a} b={self.b}")
        if self.gamma != (self.r - 1) * self.a + self.b + 2:
            raise DomainError(f"cartan domain: genus {self.gamma} != (r-1)a + b + 2")
        if 2 * self.n != 2 * self.r + self.r * (self.r - 1) * self.a + 2 * self.r * self.b:
            raise DomainError(f"cartan domain: dimension {self.n} != r + r(r-1)a/2 + rb")

    @property
    def wallach(self) -> WallachSet:
        return WallachSet(a=self.a, r=self.r)

    @property
    def einstein_constant(self) -> int:
        return -self.gamma

    @property
    def is_ball(self) -> bool:
        return self.r == 1

    @property
    def label(self) -> str:
        if self.family is Family.BALL:
            return f"CHn:{self.n}"
        if self.family is Family.I:
            return f"I:{self.size[0]}x{self.size[1]}"
        if self.size:
            return f"{self.family.value}:{self.size[0]}"
        return self.family.value

    def as_dict(self) -> dict:
        return {
            "family": self.family.value,
            "label": self.label,
            "r": self.r,
            "a": self.a,
            "b": self.b,
            "n": self.n,
            "gamma": self.gamma,
            "wallach": self.wallach.describe(),
        }


def structural_constants(family: Family | str, *size: int) -> CartanDomain:
    family = Family(family) if not isinstance(family, Family) else family
    if family is Family.BALL:
        (n,) = _expect(size, 1, family)
        if n < 1:
            raise DomainError(f"cartan domain: ball dimension {n} < 1")
        return CartanDomain(family, (n,), r=1, a=2, b=n - 1, n=n, gamma=n + 1)
    if family is Family.I:
        p, q = _expect(size, 2, family)
        if min(p, q) < 1:
            raise DomainError(f"cartan domain: I({p},{q}) needs positive sizes")
        r = min(p, q)
        return CartanDomain(family, (p, q), r=r, a=2, b=abs(q - p), n=p * q, gamma=p + q)
    if family is Family.II:
        (m,) = _expect(size, 1, family)
        if m < 2:
            raise DomainError(f"cartan domain: II({m}) needs m >= 2")
        return CartanDomain(
            family, (m,), r=m // 2, a=4, b=2 * (m % 2), n=m * (m - 1) // 2, gamma=2 * (m - 1)
        )
    if family is Family.III:
        (m,) = _expect(size, 1, family)
        if m < 1:
            raise DomainError(f"cartan domain: III({m}) needs m >= 1")
        return CartanDomain(family, (m,), r=m, a=1, b=0, n=m * (m + 1) // 2, gamma=m + 1)
    if family is Family.IV:
        (m,) = _expect(size, 1, family)
        if m < 3:
            raise DomainError(f"cartan domain: IV({m}) needs m >= 3")
        return CartanDomain(family, (m,), r=2, a=m - 2, b=0, n=m, gamma=m)
    _expect(size, 0, family)
    if family is Family.EVI:
        return CartanDomain(family, (), r=2, a=6, b=4, n=16, gamma=12)
    return CartanDomain(family, (), r=3, a=8, b=0, n=27, gamma=18)


def _expect(size: tuple[int, ...], count: int, family: Family) -> tuple[int, ...]:
    if len(size) != count:
        raise DomainError(f"cartan domain: {family.value} takes {count} size parameter(s), got {size}")
    return tuple(int(s) for s in size)


@dataclass(frozen=True)
class ProductDomain:
    factors: tuple[CartanDomain, ...]
    exponents: tuple[Fraction, ...]     # mu_j, one per factor

    def __post_init__(self):
        if not self.factors:
            raise DomainError("product domain: needs at least one factor")
        if len(self.factors) != len(self.exponents):
            raise DomainError(
                f"product domain: {len(self.factors)} factors but {len(self.exponents)} exponents"
            )
        if any(mu <= 0 for mu in self.exponents):
            raise DomainError(f"product domain: exponents must be positive, got {self.exponents}")

    @property
    def n(self) -> int:
        return sum(factor.n for factor in self.factors)

    @property
    def offsets(self) -> tuple[int, ...]:
        out = []
        running = 0
        for factor in self.factors:
            out.append(running)
            running += factor.n
        return tuple(out)

    @property
    def label(self) -> str:
        names = ",".join(factor.label for factor in self.factors)
        mus = ",".join(str(mu) for mu in self.exponents)
        return f"prod:[{names}]:mu=[{mus}]"

    def as_dict(self) -> dict:
        return {
            "label": self.label,
            "n": self.n,
            "factors": [factor.as_dict() for factor in self.factors],
            "exponents": [str(mu) for mu in self.exponents],
        }


_BALL = re.compile(r"^(?:CHn:|CH|ball:)(\d+)$", re.IGNORECASE)
_TYPE_I = re.compile(r"^I:(\d+)x(\d+)$")
_SIZED = re.compile(r"^(II|III|IV):(\d+)$")
_PRODUCT = re.compile(r"^prod:\[(.*)\]:mu=\[(.*)\]$")


def parse_cartan(text: str) -> CartanDomain:
    text = text.strip()
    match = _BALL.match(text)
    if match:
        return structural_constants(Family.BALL, int(match.group(1)))
    match = _TYPE_I.match(text)
    if match:
        return structural_constants(Family.I, int(match.group(1)), int(match.group(2)))
    match = _SIZED.match(text)
    if match:
        return structural_constants(Family(match.group(1)), int(match.group(2)))
    if text in (Family.EVI.value, Family.EVII.value):
        return structural_constants(Family(text))
    raise DomainError(f"domain descriptor: cannot parse {text!r}")


def parse_domain(text: str) -> CartanDomain | ProductDomain:
    match = _PRODUCT.match(text.strip())
    if not match:
        return parse_cartan(text)
    factors = tuple(parse_cartan(part) for part in match.group(1).split(",") if part.strip())
    try:
        exponents = tuple(parse_rational(part) for part in match.group(2).split(",") if part.strip())
    except GRatError as exc:
        raise DomainError(f"domain descriptor: bad exponent list in {text!r}") from exc
    return ProductDomain(factors=factors, exponents=exponents)


def catalog(limit: int = 5) -> list[CartanDomain]:
    """Representatives of every family, small sizes first."""
    domains = [structural_constants(Family.BALL, n) for n in range(1, limit + 1)]
    domains += [
        structural_constants(Family.I, p, q)
        for p in range(1, limit + 1)
        for q in range(p, limit + 1)
    ]
    domains += [structural_constants(Family.II, m) for m in range(2, limit + 3)]
    domains += [structural_constants(Family.III, m) for m in range(1, limit + 1)]
    domains += [structural_constants(Family.IV, m) for m in range(3, limit + 3)]
    domains += [structural_constants(Family.EVI), structural_constants(Family.EVII)]
    return domains

#!/usr/bin/env python3
# tab-width:4

"""
GRat - Gaussian rationals as sympy's QQ_I elements, plus the exact string
format every JSON record uses ("p/q", "p/q+r/s i", "r/s i").

Coefficients stay Gaussian even when a series is real-valued: the dual of a
flag-manifold potential and the restriction of a metric to a complex line
both leave the reals.
"""

from __future__ import annotations

from fractions import Fraction

from sympy.polys.domains import QQ
from sympy.polys.domains import QQ_I

GRat = type(QQ_I.one)

ZERO = QQ_I.zero
ONE = QQ_I.one


class GRatError(ValueError):
    """
    The text or value cannot be read as a Gaussian rational.
    """


def to_fraction(q) -> Fraction:
    """Any exact rational (int, Fraction, QQ element, sympy Rational) to Fraction."""
    if isinstance(q, Fraction):
        return q
    if isinstance(q, int):
        return Fraction(q)
    numerator = getattr(q, "numerator", None)
    denominator = getattr(q, "denominator", None)
    if numerator is not None and denominator is not None:
        if callable(numerator):  # sympy PythonMPQ style accessors
            numerator = numerator()
            denominator = denominator()
        return Fraction(int(numerator), int(denominator))
    if hasattr(q, "p") and hasattr(q, "q"):
        return Fraction(int(q.p), int(q.q))
    return Fraction(str(q))


def _qq(value) -> object:
    value = to_fraction(value)
    return QQ(value.numerator, value.denominator)


def grat(re_part=0, im_part=0) -> GRat:
    if isinstance(re_part, GRat) and not im_part:
        return re_part
    if isinstance(re_part, str):
        return parse_grat(re_part)
    return QQ_I(_qq(re_part), _qq(im_part))


def real_part(c: GRat) -> Fraction:
    return to_fraction(c.x)


def imag_part(c: GRat) -> Fraction:
    return to_fraction(c.y)


def conjugate_grat(c: GRat) -> GRat:
    return QQ_I(c.x, -c.y)


def is_real(c: GRat) -> bool:
    return not c.y


def _format_rational(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def format_grat(c: GRat) -> str:
    re_q = real_part(c)
    im_q = imag_part(c)
    if not im_q:
        return _format_rational(re_q)
    if not re_q:
        return f"{_format_rational(im_q)} i"
    sign = "+" if im_q > 0 else "-"
    return f"{_format_rational(re_q)}{sign}{_format_rational(abs(im_q))} i"


def parse_grat(text: str) -> GRat:
    """Inverse of format_grat; also accepts "i", "-i" and bare integers."""
    cleaned = text.strip().replace(" ", "")
    if not cleaned:
        raise GRatError("grat: empty coefficient string")
    if not cleaned.endswith("i"):
        try:
            return grat(Fraction(cleaned))
        except (ValueError, ZeroDivisionError) as exc:
            raise GRatError(f"grat: cannot parse {text!r}") from exc
    body = cleaned[:-1]
    split = max(body.rfind("+"), body.rfind("-"))
    if split > 0:
        re_text, im_text = body[:split], body[split:]
    else:
        re_text, im_text = "0", body
    if im_text in ("", "+"):
        im_text = "1"
    elif im_text == "-":
        im_text = "-1"
    try:
        return grat(Fraction(re_text), Fraction(im_text))
    except (ValueError, ZeroDivisionError) as exc:
        raise GRatError(f"grat: cannot parse {text!r}") from exc


def parse_rational(text: str | int | Fraction) -> Fraction:
    """CLI-facing "p/q" reader; rejects anything with an imaginary part."""
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise GRatError(f"rational: cannot parse {text!r}") from exc

"""Exact rational scalars and their textual form.

All arithmetic in this package is exact.  Scalars are ``fractions.Fraction``
values, which are always stored in lowest terms with a positive denominator;
floats are rejected everywhere so no rounding can sneak in.
"""

from __future__ import annotations

from fractions import Fraction

Rational = Fraction


def rat(value) -> Fraction:
    """Coerce an int, a string like ``"3/4"`` or ``"-2"``, or a Fraction.

    Floats are rejected on purpose: they would silently destroy exactness.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("bool is not a rational scalar")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a rational literal: {value!r}") from exc
    raise TypeError(f"cannot coerce {type(value).__name__} to a rational")


def rat_str(value: Fraction) -> str:
    """Render as ``"p/q"``, or plain ``"p"`` when the denominator is 1."""
    value = rat(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"

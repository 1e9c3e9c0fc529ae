"""Formatting and parsing of exact values (int or Fraction)."""

from __future__ import annotations

from fractions import Fraction

__all__ = ["fmt_exact", "parse_exact", "as_fraction"]


def fmt_exact(x) -> str:
    """Render "p/q" with no whitespace; integers render without "/1"."""
    f = Fraction(x)
    if f.denominator == 1:
        return str(f.numerator)
    return f"{f.numerator}/{f.denominator}"


def parse_exact(s: str) -> Fraction:
    return Fraction(s)


def as_fraction(x) -> Fraction:
    return Fraction(x)

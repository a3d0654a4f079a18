"""Exact-number encoding shared by reports and the command line."""

from fractions import Fraction


def encode(value):
    """Decimal string for integers, ``{"num", "den"}`` for other rationals."""
    v = Fraction(value)
    if v.denominator == 1:
        return str(v.numerator)
    return {"num": str(v.numerator), "den": str(v.denominator)}


def decode(data):
    if isinstance(data, dict):
        return Fraction(int(data["num"]), int(data["den"]))
    return Fraction(int(data))

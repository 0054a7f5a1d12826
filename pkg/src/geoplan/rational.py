"""Exact rational helpers used throughout the package.

All round-trip times and demand probabilities are kept as `Fraction`
internally so that optimizer results, oracle results and report values
can be compared for exact equality.  Floats only appear at ingestion
and are read through their shortest decimal representation.
"""

from __future__ import annotations

from fractions import Fraction


def to_fraction(value) -> Fraction:
    """Coerce a JSON-ish numeric value to an exact Fraction.

    Strings may be decimal literals ("0.025") or ratios ("1/40").
    Floats are interpreted via their decimal repr, so 0.025 means
    exactly 1/40 rather than the nearest binary double.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not numeric values")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(str(value))
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot interpret {value!r} as a rational number")


def frac_str(value: Fraction) -> str:
    """Exact rendering: integers bare, everything else as "p/q"."""
    f = Fraction(value)
    if f.denominator == 1:
        return str(f.numerator)
    return f"{f.numerator}/{f.denominator}"


def frac_decimal(value: Fraction, places: int = 6) -> str:
    """Fixed-point decimal rendering with round-half-to-even."""
    f = Fraction(value)
    sign = "-" if f < 0 else ""
    scaled = abs(f) * 10**places
    whole, rem = divmod(scaled.numerator, scaled.denominator)
    # round half to even on the remainder
    double = 2 * rem
    if double > scaled.denominator or (double == scaled.denominator and whole % 2 == 1):
        whole += 1
    digits = str(whole).rjust(places + 1, "0")
    return f"{sign}{digits[:-places]}.{digits[-places:]}"

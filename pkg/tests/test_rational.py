from fractions import Fraction

import pytest

from geoplan.rational import frac_decimal, frac_str, to_fraction


def test_decimal_string_is_exact():
    assert to_fraction("0.025") == Fraction(1, 40)


def test_float_reads_as_printed():
    # 0.025 the double is not 1/40, but its shortest repr is
    assert to_fraction(0.025) == Fraction(1, 40)


def test_ratio_string():
    assert to_fraction("9/40") == Fraction(9, 40)
    assert to_fraction(" 13/10 ") == Fraction(13, 10)


def test_int_and_fraction_pass_through():
    assert to_fraction(7) == Fraction(7)
    assert to_fraction(Fraction(3, 2)) == Fraction(3, 2)


def test_bool_rejected():
    with pytest.raises(TypeError):
        to_fraction(True)


def test_other_types_rejected():
    with pytest.raises(TypeError):
        to_fraction(None)


def test_frac_str():
    assert frac_str(Fraction(13, 10)) == "13/10"
    assert frac_str(Fraction(4, 2)) == "2"
    assert frac_str(Fraction(0)) == "0"
    assert frac_str(Fraction(-9, 40)) == "-9/40"


def test_frac_decimal():
    assert frac_decimal(Fraction(13, 10)) == "1.300000"
    assert frac_decimal(Fraction(1, 3)) == "0.333333"
    assert frac_decimal(Fraction(2, 3)) == "0.666667"
    assert frac_decimal(Fraction(-13, 10)) == "-1.300000"
    assert frac_decimal(Fraction(2)) == "2.000000"


def test_frac_decimal_half_to_even():
    assert frac_decimal(Fraction(1, 2_000_000)) == "0.000000"
    assert frac_decimal(Fraction(3, 2_000_000)) == "0.000002"

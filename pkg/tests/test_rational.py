from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from bnucleolus.rational import format_rational, parse_rational


@pytest.mark.parametrize("text,value", [("3", Fraction(3)), ("-7/4", Fraction(-7, 4)),
                                        ("6/4", Fraction(3, 2)), ("+2", Fraction(2))])
def test_parse(text, value):
    assert parse_rational(text) == value


@pytest.mark.parametrize("bad", ["0.5", "1e3", "1/", "/2", "a", "", "1/0"])
def test_parse_rejects(bad):
    with pytest.raises((ValueError, ZeroDivisionError)):
        parse_rational(bad)


def test_format_drops_unit_denominator():
    assert format_rational(Fraction(4, 2)) == "2"
    assert format_rational(Fraction(-3, 6)) == "-1/2"


@given(st.fractions())
def test_round_trip(x):
    assert parse_rational(format_rational(x)) == x

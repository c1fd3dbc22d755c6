import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest

from interval_exchange.utils.error import BadLiteral, IncompatibleField
from interval_exchange.utils.exact_real import (
    ONE,
    ZERO,
    CirclePoint,
    ExactReal,
    Ordering,
    circle_add,
    circle_sub,
    compare,
    nearest_int_dist,
)
from interval_exchange.utils.lattice import LatticeFrame
from interval_exchange.utils.literal_parser import format_exact, parse_exact
from test_helper.oracles import GOLDEN, random_quadratic


def test_circle_add_wraps():
    assert circle_add(Fraction(3, 4), Fraction(1, 2)) == ExactReal.rational(1, 4)
    assert circle_add(Fraction(1, 2), Fraction(1, 2)) == ZERO


def test_circle_sub_wraps():
    assert circle_sub(Fraction(1, 4), Fraction(1, 2)) == ExactReal.rational(3, 4)
    assert circle_sub(GOLDEN, GOLDEN) == ZERO


def test_circle_add_quadratic_stays_in_unit_interval():
    x = circle_add(GOLDEN, GOLDEN)
    assert isinstance(x, CirclePoint)
    assert x == 2 * GOLDEN - 1
    assert ZERO <= x < ONE


def test_nearest_int_dist():
    assert nearest_int_dist(Fraction(7, 4)) == ExactReal.rational(1, 4)
    assert nearest_int_dist(Fraction(-1, 3)) == ExactReal.rational(1, 3)
    assert nearest_int_dist(Fraction(1, 2)) == ExactReal.rational(1, 2)
    # golden mean: ||phi|| = 1 - phi = phi^2
    assert nearest_int_dist(GOLDEN) == GOLDEN * GOLDEN


def test_compare_is_exact_for_close_values():
    a = parse_exact("sqrt(2)")
    b = ExactReal.rational(141421356237, 100000000000)
    assert compare(a, b) == Ordering.GREATER
    assert compare(b, a) == Ordering.LESS
    assert compare(a, a) == Ordering.EQUAL


def test_mixed_fields_raise():
    with pytest.raises(IncompatibleField):
        parse_exact("sqrt(2)") + parse_exact("sqrt(3)")


def test_normalisation_makes_equal_values_identical():
    a = parse_exact("2*sqrt(8)/4")
    b = parse_exact("sqrt(2)")
    assert a == b
    assert hash(a) == hash(b)
    assert ExactReal.rational(2, 4) == Fraction(1, 2)


def test_floor_and_frac():
    x = parse_exact("sqrt(5)/2-1/2")
    assert x.floor() == 0
    assert (x + 3).floor() == 3
    assert (-x).floor() == -1
    assert (-x).frac() == ONE - x
    assert math.ceil(x) == 1
    assert math.ceil(ExactReal.rational(2)) == 2


def test_random_quadratics_in_unit_interval():
    rng = np.random.default_rng(3)
    for _ in range(50):
        x = random_quadratic(rng)
        assert not x.is_rational
        assert x.sign() > 0 and x < 1
        assert x.floor() == 0
        assert x * x.inverse() == ONE
        assert float(x) == pytest.approx(float(x.to_mpf(40)), rel=1e-12)


def test_inverse_of_golden_mean():
    # 1 / phi = 1 + phi
    assert GOLDEN.inverse() == GOLDEN + 1


def test_float_and_mpf_agree():
    # sqrt(1000001) - 1000 nearly cancels
    x = ExactReal.quadratic(-1000, 1, 1000001)
    with mpmath.workdps(50):
        expected = mpmath.sqrt(mpmath.mpf(1000001)) - 1000
        assert abs(x.to_mpf(50) - expected) < mpmath.mpf(10) ** -45
        expected = float(expected)
    assert float(x) == pytest.approx(expected, rel=1e-12)
    assert float(GOLDEN) == pytest.approx((math.sqrt(5) - 1) / 2, rel=1e-15)


@pytest.mark.parametrize(
    "literal, expected",
    [
        ("1/3", ExactReal.rational(1, 3)),
        ("0.25", ExactReal.rational(1, 4)),
        ("golden", ExactReal.quadratic(Fraction(-1, 2), Fraction(1, 2), 5)),
        ("sqrt(5)/2-1/2", ExactReal.quadratic(Fraction(-1, 2), Fraction(1, 2), 5)),
        ("1/3+2/7*sqrt(2)", ExactReal.quadratic(Fraction(1, 3), Fraction(2, 7), 2)),
        ("sqrt(12)", ExactReal.quadratic(0, 2, 3)),
        ("1/(sqrt(2)-1)", ExactReal.quadratic(1, 1, 2)),
    ],
)
def test_parse_exact(literal, expected):
    assert parse_exact(literal) == expected


@pytest.mark.parametrize(
    "literal", ["", "x+1", "2^(1/3)", "sqrt(2)+sqrt(3)", "pi", "1/"]
)
def test_parse_exact_rejects(literal):
    with pytest.raises(BadLiteral):
        parse_exact(literal)


def test_format_exact_parses_back():
    for literal in ["3/7", "golden", "1/3+2/7*sqrt(2)", "-sqrt(3)"]:
        value = parse_exact(literal)
        assert parse_exact(format_exact(value)) == value


def test_lattice_frame_coordinates():
    values = [GOLDEN, ExactReal.rational(1, 3), ONE - GOLDEN]
    frame = LatticeFrame.common(values)
    for value in values:
        p, q = frame.coords(value)
        assert frame.value(p, q) == value
        assert frame.to_float(p, q) == pytest.approx(float(value))

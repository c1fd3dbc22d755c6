from fractions import Fraction

import numpy as np
import pytest

from interval_exchange.gauges.scale_sequence import (
    ExprScale,
    PowerLogScale,
    PowerScale,
    TableScale,
    classify_scale,
    parse_scale,
)
from interval_exchange.utils.error import BadLiteral, ScaleTooSlow


def test_parse_scale_kinds():
    assert isinstance(parse_scale("pow:2"), PowerScale)
    assert isinstance(parse_scale("powlog:1,1"), PowerLogScale)
    assert isinstance(parse_scale("table:1,4,9"), TableScale)
    assert isinstance(parse_scale("expr:n*log(n)@256"), ExprScale)
    assert parse_scale("pow:2").spec() == "pow:2"
    assert parse_scale("pow:1.5").spec() == "pow:3/2"
    assert parse_scale("powlog:1,1").spec() == "powlog:1,1"


@pytest.mark.parametrize(
    "text", ["pow:abc", "pow:0", "bogus:1", "powlog:1", "expr:n*x"]
)
def test_parse_scale_rejects(text):
    with pytest.raises(BadLiteral):
        parse_scale(text)


def test_power_threshold_is_exact():
    square = PowerScale(2)
    assert square.threshold_index(3) == 3
    assert square.threshold_index(16) == 16
    # n^(1/2) >= 10  <=>  n >= 100
    assert PowerScale(Fraction(3, 2)).threshold_index(10) == 100
    assert square.exact_value(7) == 49
    assert PowerScale(Fraction(3, 2)).exact_value(4) is None


def test_slow_scales_raise():
    with pytest.raises(ScaleTooSlow):
        PowerScale(1).threshold_index(2)
    with pytest.raises(ScaleTooSlow):
        PowerLogScale(1, 0).threshold_index(2)
    with pytest.raises(ScaleTooSlow):
        PowerLogScale(1, -1).threshold_index(2)


def test_power_log_thresholds():
    n_log_n = PowerLogScale(1, 1)
    # ln n >= 2  <=>  n >= e^2 = 7.389...
    assert n_log_n.threshold_index(2) == 8
    # e^16 = 8886110.52...
    assert n_log_n.threshold_index(16) == 8886111
    # n / ln n >= 10 first holds at n = 36
    assert PowerLogScale(2, -1).threshold_index(10) == 36


def test_closed_form_flags():
    assert PowerScale(2).classify().nice
    log_square = PowerLogScale(0, 2).classify()
    assert log_square.monotone
    assert not log_square.two_jumpy
    assert PowerScale(1).classify().to_json()["certified"] == "closed-form"


def test_classify_scale_examples():
    power = classify_scale(PowerScale(1))
    assert power.monotone and power.steady and power.two_jumpy
    assert power.bounded_ratio and power.nice

    doubling = classify_scale(TableScale([2**n for n in range(1, 65)]))
    assert doubling.nice
    assert not doubling.steady

    logarithm = classify_scale(TableScale([np.log(n + 1) for n in range(1, 65)]))
    assert logarithm.monotone
    assert not logarithm.two_jumpy


def test_table_scale():
    table = TableScale([n * n for n in range(1, 65)])
    flags = table.classify()
    assert flags.monotone
    assert flags.two_jumpy
    assert flags.bounded_ratio
    assert flags.certified == "finite-horizon"
    assert table.ratio_diverges()
    assert table.threshold_index(10) == 10
    assert table.exact_value(3) == 9
    with pytest.raises(ScaleTooSlow):
        table.values(65)
    with pytest.raises(ScaleTooSlow):
        table.threshold_index(100)


def test_table_too_slow():
    flat = TableScale([n for n in range(1, 65)])
    assert not flat.ratio_diverges()
    with pytest.raises(ScaleTooSlow):
        flat.threshold_index(2)


def test_expr_scale():
    scale = ExprScale("n*log(n)", horizon=512)
    assert scale.first_index == 2
    values = scale.values(16)
    assert np.isnan(values[1])
    assert values[8] == pytest.approx(8 * np.log(8))
    assert ExprScale("n**2").exact_value(5) == 25
    assert ExprScale("n*log(n)").exact_value(5) is None
    assert float(scale.mp_value(10)) == pytest.approx(10 * np.log(10))
    assert scale.ratio_diverges()

from fractions import Fraction

import pytest

from interval_exchange.dioph.akc import akc_measure
from interval_exchange.dioph.continued_fraction import cf_expand
from interval_exchange.dioph.liouville import liouville_from_scale
from interval_exchange.gauges.scale_sequence import PowerScale
from interval_exchange.utils.error import (
    BudgetExhausted,
    DomainError,
    NotIrrational,
    ScaleTooSlow,
)
from interval_exchange.utils.exact_real import ONE, ExactReal
from test_helper.oracles import GOLDEN

SQUARE = PowerScale(2)


def test_liouville_quotients_for_square_scale():
    construction = liouville_from_scale(SQUARE, 3)
    # s_n / n = n reaches k^4 at n = k^4
    assert construction.n == [1, 16, 81]
    assert construction.a == [3, 16, 81]
    assert construction.q == [1, 3, 49, 3972]
    assert construction.m == [49, 993]
    assert all(construction.chain_holds)
    assert all(construction.quotients_hold)
    assert construction.feasible


def test_liouville_alpha_shares_convergents():
    construction = liouville_from_scale(SQUARE, 3)
    alpha = construction.alpha()
    cf = cf_expand(alpha, 5)
    assert cf.a == (3, 16, 81, 1, 1)
    assert cf.q[4] == 4021
    assert cf.q[5] == 7993


def test_liouville_json_keeps_big_integers():
    data = liouville_from_scale(SQUARE, 5, feasible_limit=10**6).to_json()
    assert data["K"] == 5
    assert data["scale"] == "pow:2"
    assert data["feasible"] is False
    assert data["tail"] == [1]


def test_liouville_rejects():
    with pytest.raises(DomainError):
        liouville_from_scale(SQUARE, 0)
    with pytest.raises(ScaleTooSlow):
        liouville_from_scale(PowerScale(1), 3)


def test_akc_measure_exact():
    result = akc_measure(GOLDEN, 5, 1, SQUARE)
    assert (result.q_k, result.q_next) == (8, 13)
    assert result.exact
    assert not result.saturated
    assert result.bound == Fraction(5, 25) + Fraction(2, 625)
    assert result.bound_holds
    assert result.union_holds
    assert result.measure <= result.union_bound


def test_akc_measure_float_path_agrees_with_exact():
    exact = akc_measure(GOLDEN, 7, Fraction(1, 2), SQUARE)
    approx = akc_measure(GOLDEN, 7, Fraction(1, 2), SQUARE, exact_budget=0)
    assert exact.exact
    assert not approx.exact
    assert abs(float(exact.measure) - approx.measure) <= approx.error + 1e-12
    assert approx.to_json()["measure_float"] == approx.measure


def test_akc_measure_saturates_on_large_balls():
    result = akc_measure(GOLDEN, 1, 1, SQUARE)
    assert result.saturated
    assert result.measure == ONE


def test_akc_measure_rejects():
    with pytest.raises(NotIrrational):
        akc_measure(Fraction(1, 3), 2, 1, SQUARE)
    with pytest.raises(DomainError):
        akc_measure(GOLDEN, 2, 0, SQUARE)
    with pytest.raises(DomainError):
        akc_measure(GOLDEN, 0, 1, SQUARE)
    with pytest.raises(BudgetExhausted):
        akc_measure(GOLDEN, 5, 1, SQUARE, ball_budget=2)


def test_akc_uses_supplied_expansion():
    alpha = liouville_from_scale(SQUARE, 3).alpha()
    cf = cf_expand(alpha, 4)
    result = akc_measure(alpha, 2, Fraction(1, 4), SQUARE, cf=cf)
    assert (result.q_k, result.q_next) == (49, 3972)
    assert isinstance(result.measure, ExactReal)
    assert result.bound_holds

import logging
from fractions import Fraction

import pytest

from lab_logging.log_helper import setup_recursive_logger

setup_recursive_logger(logging.INFO)
logger = logging.getLogger(__name__)

from interval_exchange.dioph.kesten import (
    chebyshev_batch,
    chebyshev_check,
    convergent_denominator,
    kesten_window_counts,
    three_distance_check,
    window_counts,
)
from interval_exchange.utils.error import DomainError, NotIrrational
from interval_exchange.utils.exact_real import ExactReal
from test_helper.oracles import GOLDEN, SQRT2_MINUS_1, brute_window_count

WINDOWS = [
    (Fraction(0), Fraction(1, 2)),
    (Fraction(1, 5), Fraction(7, 10)),
    (Fraction(1, 3), Fraction(3, 8)),
]


def test_convergent_denominators():
    denominators = [convergent_denominator(GOLDEN, m) for m in range(7)]
    assert denominators == [1, 1, 2, 3, 5, 8, 13]
    assert convergent_denominator(GOLDEN, 10) == 89
    assert convergent_denominator(SQRT2_MINUS_1 + 1, 3) == 12
    with pytest.raises(NotIrrational):
        convergent_denominator(Fraction(3, 4), 2)


@pytest.mark.parametrize("alpha", [GOLDEN, SQRT2_MINUS_1])
@pytest.mark.parametrize("m", [2, 3, 4, 5])
def test_three_distance(alpha, m):
    verdict = three_distance_check(alpha, m)
    assert verdict.holds
    assert verdict.empty == []
    assert verdict.to_json()["q"] == convergent_denominator(alpha, m)


def test_full_window_counts_every_point():
    counts = window_counts(GOLDEN, 0, 1, 13)
    assert counts.values == [13]
    assert counts.holds


def test_window_counts_match_brute_force():
    a, b = Fraction(1, 5), Fraction(7, 10)
    counts = window_counts(GOLDEN, a, b, 21)
    seen = {
        brute_window_count(GOLDEN, a, b, 21, Fraction(k, 97)) for k in range(97)
    }
    assert seen <= set(counts.values)


@pytest.mark.parametrize("alpha", [GOLDEN, SQRT2_MINUS_1])
@pytest.mark.parametrize("window", WINDOWS)
def test_kesten_counts_stay_in_bracket(alpha, window):
    for m in range(2, 9):
        counts = kesten_window_counts(alpha, window[0], window[1], m)
        assert counts.consecutive
        assert len(counts.values) <= 4
        assert counts.holds


def test_window_counts_reject_bad_windows():
    with pytest.raises(DomainError):
        window_counts(GOLDEN, Fraction(1, 2), Fraction(1, 2), 5)
    with pytest.raises(DomainError):
        window_counts(GOLDEN, 0, Fraction(3, 2), 5)


def test_chebyshev_on_the_diagonal():
    x = Fraction(1, 3)
    result = chebyshev_check(GOLDEN, x, x, 1000)
    # 610 is the only Fibonacci number in (500, 1000]
    assert result.window_argmin == 610
    inverse_sqrt5 = float(ExactReal.quadratic(0, Fraction(1, 5), 5))
    assert result.window_min == pytest.approx(inverse_sqrt5, abs=1e-5)
    assert result.argmin == 1
    assert result.running_min == pytest.approx(float(1 - GOLDEN))
    assert result.holds


def test_chebyshev_batch():
    pairs = [(Fraction(0), Fraction(1, 2)), (Fraction(1, 7), Fraction(5, 9))]
    results = chebyshev_batch(SQRT2_MINUS_1, pairs, 512)
    assert [result.holds for result in results] == [True, True]
    assert all(256 < result.window_argmin <= 512 for result in results)
    assert results[0].to_json()["y"] == "1/2"

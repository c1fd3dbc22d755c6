from fractions import Fraction

import numpy as np
import pytest

from interval_exchange.iet.algebra import power
from interval_exchange.iet.delta_sets import (
    delta_prime,
    delta_prime_ladder,
    delta_prime_n,
    delta_set,
)
from interval_exchange.iet.iet import Iet, identity, rotation
from interval_exchange.iet.keane import VerdictStatus, keane_certificate
from interval_exchange.utils.exact_real import ZERO, ExactReal
from test_helper.oracles import GOLDEN, SQRT2_MINUS_1, random_quadratic_iet

THREE_IET = Iet([Fraction(1, 2), Fraction(1, 4), Fraction(1, 4)], [3, 2, 1])


def test_delta_set_of_three_interval_example():
    delta = delta_set(THREE_IET)
    assert len(delta) == 3
    assert list(delta) == [
        ExactReal.rational(1, 4),
        ExactReal.rational(1, 2),
        ExactReal.rational(3, 4),
    ]
    assert Fraction(3, 4) in delta
    assert delta.to_json() == {"n": 1, "points": ["1/4", "1/2", "3/4"]}


def test_delta_prime_contains_zero_and_differences():
    prime = delta_prime(THREE_IET)
    assert ZERO in prime
    # {1/4, 1/2, 3/4} is closed under differences mod 1
    assert len(prime) == 4


def test_rotation_delta_sets_are_degenerate():
    rot = rotation(SQRT2_MINUS_1)
    assert list(delta_set(rot)) == [SQRT2_MINUS_1]
    assert list(delta_prime(rot)) == [ZERO]
    assert delta_prime_ladder(rot, [1, 2, 8, 32]) == [(1, 1), (2, 1), (8, 1), (32, 1)]


def test_delta_prime_ladder_matches_direct_sets():
    rng = np.random.default_rng(3)
    iet = random_quadratic_iet(rng, 4)
    table = delta_prime_ladder(iet, [1, 2, 3, 5, 8])
    for n, card in table:
        assert card == len(delta_prime_n(iet, n))
    cards = [card for _, card in table]
    assert cards == sorted(cards)
    assert delta_prime_n(iet, 3).issubset(delta_prime_n(iet, 5))


@pytest.mark.parametrize("seed", range(6))
def test_delta_prime_cardinality_bound(seed):
    rng = np.random.default_rng(seed)
    r = int(rng.integers(2, 6))
    iet = random_quadratic_iet(rng, r)
    for n, card in delta_prime_ladder(iet, [1, 2, 4, 8, 16]):
        assert card < r**2 * n**3
    assert len(delta_set(iet)) <= r


def test_delta_prime_n_rejects_zero():
    with pytest.raises(ValueError):
        delta_prime_n(THREE_IET, 0)
    with pytest.raises(ValueError):
        delta_prime_ladder(THREE_IET, [0, 1])


def test_keane_on_golden_rotation_is_certified():
    verdict = keane_certificate(rotation(GOLDEN), 500)
    assert verdict.certified
    assert verdict.to_json()["status"] == VerdictStatus.CERTIFIED


def test_keane_finds_smallest_connection():
    verdict = keane_certificate(THREE_IET, 100)
    assert verdict.violated
    assert (verdict.k, verdict.i, verdict.j) == (2, 1, 2)
    assert str(verdict) == "violated(2, 1, 2)"


def test_keane_identity_and_rational_cases():
    verdict = keane_certificate(identity(), 10)
    assert (verdict.status, verdict.k, verdict.i, verdict.j) == (
        VerdictStatus.VIOLATED,
        1,
        0,
        0,
    )
    # rotation by 1/3 closes its discontinuity orbit only at k = 3
    assert keane_certificate(rotation(Fraction(1, 3)), 2).status == (
        VerdictStatus.INCONCLUSIVE
    )
    assert keane_certificate(rotation(Fraction(1, 3)), 3).k == 3


@pytest.mark.parametrize("seed", range(8))
def test_keane_witness_is_a_real_connection(seed):
    rng = np.random.default_rng(100 + seed)
    iet = random_quadratic_iet(rng, int(rng.integers(2, 6)))
    verdict = keane_certificate(iet, 60)
    if iet.field() > 1:
        assert verdict.status != VerdictStatus.INCONCLUSIVE
    if verdict.violated:
        discontinuities = iet.canonical().discontinuities
        start = discontinuities[verdict.i - 1]
        assert power(iet, verdict.k)(start) == discontinuities[verdict.j - 1]

from fractions import Fraction

import numpy as np
import pytest

from interval_exchange.gauges.discrepancy import (
    MAX_GRID,
    count_profile,
    discrepancy,
    grid_discrepancy,
    grid_windows,
    omega_discrepancy,
    sampled_discrepancy,
)
from interval_exchange.gauges.scale_sequence import PowerScale
from interval_exchange.gauges.tau_entropy import (
    dyadic_ladder,
    psi_summability,
    tau_entropy,
    tau_omega_bound,
)
from interval_exchange.iet.iet import identity, rotation
from interval_exchange.induce.induced_map import iet3_from_rotation
from interval_exchange.utils.error import DomainError
from interval_exchange.utils.exact_real import ZERO, ExactReal
from test_helper.oracles import GOLDEN, brute_window_count, random_quadratic_iet

HALF = Fraction(1, 2)


def test_identity_discrepancy_is_one_half():
    result = discrepancy(identity(), 10, 0, HALF)
    assert result.value == ExactReal.rational(1, 2)
    assert result.to_json()["under_approximation"] is False


def test_half_rotation_is_balanced_at_even_times():
    assert discrepancy(rotation(HALF), 2, 0, HALF).value == ZERO
    assert discrepancy(rotation(HALF), 3, 0, HALF).value == ExactReal.rational(1, 6)


@pytest.mark.parametrize("q", [5, 13, 34, 89])
def test_golden_discrepancy_at_fibonacci_times(q):
    result = discrepancy(rotation(GOLDEN), q, 0, HALF)
    assert result.value * q <= 3


def test_count_profile_matches_brute_force():
    alpha = GOLDEN
    profile = count_profile(rotation(alpha), 21, Fraction(1, 5), Fraction(3, 4))
    lefts = [left for left, _ in profile]
    assert lefts == sorted(lefts)
    assert lefts[0] == ZERO
    for x in [Fraction(k, 41) for k in range(41)]:
        count = [c for left, c in profile if left <= x][-1]
        assert count == brute_window_count(alpha, Fraction(1, 5), Fraction(3, 4), 21, x)


def test_sampled_discrepancy_is_a_lower_bound():
    rng = np.random.default_rng(9)
    iet = random_quadratic_iet(rng, 3)
    exact = discrepancy(iet, 40, Fraction(1, 4), Fraction(3, 4)).value
    points = [Fraction(k, 17) for k in range(17)]
    assert sampled_discrepancy(iet, 40, Fraction(1, 4), Fraction(3, 4), points) <= exact


def test_grid_discrepancy():
    windows = grid_windows(rotation(HALF), 2)
    assert len(windows) == 3
    result = grid_discrepancy(rotation(HALF), 2, 2)
    assert result.value == ZERO
    assert result.to_json()["under_approximation"] is True
    with pytest.raises(DomainError):
        grid_windows(identity(), MAX_GRID + 1)


def test_discrepancy_domain_errors():
    with pytest.raises(DomainError):
        discrepancy(identity(), 0, 0, HALF)
    with pytest.raises(DomainError):
        discrepancy(identity(), 4, HALF, HALF)
    with pytest.raises(DomainError):
        omega_discrepancy(identity(), [16])


def test_omega_separates_identity_from_golden_rotation():
    assert omega_discrepancy(identity(), [16, 32, 64]).omega_hat == pytest.approx(1.0)
    golden = omega_discrepancy(rotation(GOLDEN), [21, 55, 144, 377])
    assert golden.omega_hat < 0.5
    assert [n for n, _ in golden.table] == [21, 55, 144, 377]


def test_dyadic_ladder():
    assert dyadic_ladder(10) == [1, 2, 4, 8, 10]
    assert dyadic_ladder(8) == [1, 2, 4, 8]


def test_tau_of_rotation_is_zero():
    estimate = tau_entropy(rotation(GOLDEN), 64)
    assert estimate.tau_hat == 0.0
    assert all(card == 1 for _, card in estimate.table)
    with pytest.raises(DomainError):
        tau_entropy(rotation(GOLDEN), 1)


def test_tau_of_three_interval_map_is_bounded():
    iet = iet3_from_rotation(GOLDEN, Fraction(1, 2))
    estimate = tau_entropy(iet, 32)
    r = iet.canonical().r
    assert all(card < r**2 * n**3 for n, card in estimate.table)
    assert 0 <= estimate.tau_hat <= 3 + 2 * np.log(r) / np.log(8)
    assert estimate.to_json()["estimate"] == "finite-horizon"


def test_psi_summability_for_rotation():
    report = psi_summability(rotation(GOLDEN), PowerScale(2), 6)
    assert report.terms[0] == (1, 1.0)
    assert [k for k, _ in report.terms] == [1, 2, 4, 8, 16, 32, 64]
    assert report.partial_sums == sorted(report.partial_sums)
    assert report.partial_sums[-1] < 4 / 3


def test_tau_omega_bound_for_rotation():
    result = tau_omega_bound(rotation(GOLDEN), 16, [21, 55, 144])
    assert result["tau_hat"] == 0.0
    assert result["holds"]

from fractions import Fraction

import pytest

from interval_exchange.dioph.continued_fraction import (
    ContinuedFraction,
    cf_expand,
    check_convergent_ineq,
    convergent_identities,
    periodic_cf_value,
    recurrence_constant,
    type_estimate,
)
from interval_exchange.utils.error import DomainError, RationalInput
from interval_exchange.utils.exact_real import ExactReal
from test_helper.oracles import GOLDEN, SQRT2_MINUS_1


def test_golden_expansion():
    cf = cf_expand(GOLDEN, 10)
    assert cf.a == (1,) * 10
    assert cf.to_json()["q"] == [1, 1, 2, 3, 5, 8, 13, 21, 34, 55]
    assert cf.q[10] == 89
    assert cf.preperiod == 0
    assert cf.period == (1,)
    assert cf.partial_quotient(50) == 1


def test_silver_expansion():
    cf = cf_expand(SQRT2_MINUS_1, 5)
    assert cf.a == (2, 2, 2, 2, 2)
    assert list(cf.q[:5]) == [1, 2, 5, 12, 29]
    assert cf.convergent(3) == Fraction(5, 12)


def test_eventually_periodic_expansion():
    alpha = periodic_cf_value([3, 7], [1, 2])
    cf = cf_expand(alpha, 9)
    assert cf.a == (3, 7, 1, 2, 1, 2, 1, 2, 1)
    assert cf.preperiod == 2
    assert cf.period == (1, 2)


def test_periodic_values():
    assert periodic_cf_value([], [1]) == GOLDEN
    assert periodic_cf_value([], [2]) == SQRT2_MINUS_1
    assert periodic_cf_value([3], [1]) == (GOLDEN + 3).inverse()
    with pytest.raises(DomainError):
        periodic_cf_value([1], [])


def test_recurrence_constants():
    golden = recurrence_constant(cf_expand(GOLDEN, 4))
    assert golden == ExactReal.quadratic(0, Fraction(1, 5), 5)
    silver = recurrence_constant(cf_expand(SQRT2_MINUS_1, 4))
    assert silver == ExactReal.quadratic(0, Fraction(1, 4), 2)
    with pytest.raises(DomainError):
        recurrence_constant(ContinuedFraction([1, 2, 3]))


@pytest.mark.parametrize("alpha", [GOLDEN, SQRT2_MINUS_1])
def test_convergent_inequalities_hold_exactly(alpha):
    cf = cf_expand(alpha, 20)
    assert all(ok for _, ok in check_convergent_ineq(cf, alpha))
    identities = convergent_identities(cf, alpha)
    assert [entry["k"] for entry in identities] == list(range(1, 20))
    assert all(entry["approximation"] and entry["determinant"] for entry in identities)


def test_expansion_rejects_bad_input():
    with pytest.raises(RationalInput):
        cf_expand(Fraction(1, 3), 5)
    with pytest.raises(DomainError):
        cf_expand(GOLDEN + 1, 5)
    with pytest.raises(DomainError):
        ContinuedFraction([1, 0, 2])
    with pytest.raises(IndexError):
        ContinuedFraction([1, 2]).partial_quotient(3)


def test_type_of_golden_mean_is_one():
    estimate = type_estimate(GOLDEN, 10**6)
    assert 1.0 <= estimate.nu_hat < 1.2
    assert all(1000 < q <= 10**6 for q, _ in estimate.table)
    assert estimate.to_json()["estimate"] == "finite-horizon"
    with pytest.raises(RationalInput):
        type_estimate(Fraction(2, 7), 100)

from __future__ import annotations

import logging
from fractions import Fraction

import mpmath
import numpy as np

from interval_exchange.dioph.continued_fraction import ContinuedFraction, cf_expand
from interval_exchange.gauges.scale_sequence import ScaleSequence
from interval_exchange.utils.error import BudgetExhausted, DomainError, NotIrrational
from interval_exchange.utils.exact_real import ONE, ZERO, ExactReal

logger = logging.getLogger(__name__)

EXACT_BALL_BUDGET = 4096
BALL_BUDGET = 5_000_000
FIXED_POINT_BITS = 64
FLOAT_EPS = 2.0**-52


class AkcMeasure:
    """

    Lebesgue measure of the union of the balls B(n alpha, c / s_n) on the circle over
    q_k <= n < q_{k+1}, next to the bound (4c + 1)/k^2 + (c + 1)/k^4 and the union
    bound min(1, sum 2c / s_n).

    `measure` is an ExactReal when every ball was merged exactly; otherwise a float
    with the enclosure radius `error`.

    """

    def __init__(
        self,
        k: int,
        c: Fraction,
        q_k: int,
        q_next: int,
        measure,
        error: float,
        union_bound,
        saturated: bool,
    ):
        self.k = k
        self.c = c
        self.q_k = q_k
        self.q_next = q_next
        self.measure = measure
        self.error = error
        self.union_bound = union_bound
        self.saturated = saturated

    @property
    def exact(self) -> bool:
        return isinstance(self.measure, ExactReal)

    @property
    def bound(self) -> Fraction:
        return (4 * self.c + 1) / self.k**2 + (self.c + 1) / Fraction(self.k**4)

    @property
    def bound_holds(self) -> bool:
        if self.exact:
            return self.measure <= self.bound
        return self.measure + self.error <= float(self.bound)

    @property
    def union_holds(self) -> bool:
        if self.exact and isinstance(self.union_bound, Fraction):
            return self.measure <= self.union_bound
        return float(self.measure) - self.error <= float(self.union_bound) * (1 + 1e-12)

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "c": str(self.c),
            "q_k": self.q_k,
            "q_k_plus_1": self.q_next,
            "balls": self.q_next - self.q_k,
            "measure": str(self.measure) if self.exact else self.measure,
            "measure_float": float(self.measure),
            "exact": self.exact,
            "error": self.error,
            "saturated": self.saturated,
            "bound": str(self.bound),
            "bound_holds": self.bound_holds,
            "union_bound": str(self.union_bound),
            "union_bound_float": float(self.union_bound),
            "union_holds": self.union_holds,
        }


def _split_arc(left, right) -> list:
    """An arc (left, right) of length < 1 as sub-intervals of [0, 1]."""
    if left < 0:
        return [(left + 1, 1), (0, right)]
    if right > 1:
        return [(left, 1), (0, right - 1)]
    return [(left, right)]


def _exact_union(
    alpha: ExactReal, q_k: int, q_next: int, c: Fraction, s: ScaleSequence
):
    arcs = []
    for n in range(q_k, q_next):
        centre = (alpha * n).frac()
        radius = ExactReal.of(c / s.exact_value(n))
        for left, right in _split_arc(centre - radius, centre + radius):
            arcs.append((ExactReal.of(left), ExactReal.of(right)))
    arcs.sort(key=lambda arc: arc[0])

    total = ZERO
    left, right = arcs[0]
    for a, b in arcs[1:]:
        if a > right:
            total = total + (right - left)
            left, right = a, b
        elif b > right:
            right = b
    return total + (right - left)


def _float_union(
    alpha: ExactReal, q_k: int, q_next: int, c: Fraction, s: ScaleSequence
):
    # n alpha mod 1 in fixed point with enough guard bits for the largest n
    bits = FIXED_POINT_BITS + q_next.bit_length()
    with mpmath.workdps(int(bits * 0.31) + 20):
        step = int(mpmath.floor(alpha.to_mpf() * mpmath.mpf(2) ** bits))
    mask = 2**bits - 1
    shift = bits - 53
    centres = np.array(
        [((n * step) & mask) >> shift for n in range(q_k, q_next)], dtype=np.float64
    ) / 2.0**53
    radii = np.array([float(c) / s.value(n) for n in range(q_k, q_next)])

    lefts = centres - radii
    rights = centres + radii
    low = lefts < 0
    high = rights > 1
    plain = ~(low | high)
    wrapped_low, wrapped_high = int(low.sum()), int(high.sum())
    all_lefts = np.concatenate(
        (
            lefts[plain],
            lefts[low] + 1,
            np.zeros(wrapped_low),
            lefts[high],
            np.zeros(wrapped_high),
        )
    )
    all_rights = np.concatenate(
        (
            rights[plain],
            np.ones(wrapped_low),
            rights[low],
            np.ones(wrapped_high),
            rights[high] - 1,
        )
    )

    order = np.argsort(all_lefts, kind="stable")
    lefts = all_lefts[order]
    rights = np.maximum.accumulate(all_rights[order])
    starts = np.concatenate(([True], lefts[1:] > rights[:-1]))
    index = np.nonzero(starts)[0]
    ends = np.concatenate((index[1:] - 1, [len(lefts) - 1]))
    measure = float(np.sum(rights[ends] - lefts[index]))

    error = len(lefts) * 2 * 8 * FLOAT_EPS
    return min(1.0, measure), error


def akc_measure(
    alpha,
    k: int,
    c,
    s: ScaleSequence,
    cf: ContinuedFraction | None = None,
    exact_budget: int = EXACT_BALL_BUDGET,
    ball_budget: int = BALL_BUDGET,
) -> AkcMeasure:
    alpha = ExactReal.of(alpha)
    if alpha.is_rational:
        raise NotIrrational(str(alpha) + " is rational")
    alpha = alpha.frac()
    c = Fraction(c)
    if c <= 0 or k < 1:
        raise DomainError("akc_measure needs c > 0 and k >= 1")

    if cf is None or cf.depth < k + 1:
        cf = cf_expand(alpha, k + 1)
    q_k, q_next = cf.q[k], cf.q[k + 1]
    balls = q_next - q_k
    if balls > ball_budget:
        raise BudgetExhausted(
            str(balls) + " balls between q_" + str(k) + " and q_" + str(k + 1)
            + " exceed the budget of " + str(ball_budget)
        )
    if q_k < s.first_index:
        raise DomainError("q_k lies before the first index of the scale")

    exact_radii = None
    if balls <= exact_budget:
        exact_radii = [s.exact_value(n) for n in range(q_k, q_next)]
        if any(r is None for r in exact_radii):
            exact_radii = None

    if exact_radii is not None:
        union_bound = min(Fraction(1), sum(2 * c / value for value in exact_radii))
    else:
        with mpmath.workdps(30):
            total = mpmath.fsum(
                2 * mpmath.mpf(c.numerator) / c.denominator / s.mp_value(n)
                for n in range(q_k, q_next)
            )
            union_bound = float(min(mpmath.mpf(1), total))

    # s is non-decreasing, so the first ball is the largest
    first = s.exact_value(q_k)
    if first is not None:
        saturated = c / first >= Fraction(1, 2)
    else:
        saturated = float(c) / s.value(q_k) >= 0.5
    if saturated:
        return AkcMeasure(k, c, q_k, q_next, ONE, 0.0, union_bound, True)

    if exact_radii is not None:
        measure = _exact_union(alpha, q_k, q_next, c, s)
        return AkcMeasure(k, c, q_k, q_next, min(measure, ONE), 0.0, union_bound, False)

    measure, error = _float_union(alpha, q_k, q_next, c, s)
    logger.debug("A_%s,%s measured in floating point, error %s", k, c, error)
    return AkcMeasure(k, c, q_k, q_next, measure, error, union_bound, False)

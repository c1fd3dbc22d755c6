from __future__ import annotations

import logging
from typing import Sequence

import mpmath
import numpy as np

from interval_exchange.dioph.continued_fraction import cf_expand
from interval_exchange.utils.error import DomainError, NotIrrational
from interval_exchange.utils.exact_real import (
    ONE,
    ZERO,
    CirclePoint,
    ExactReal,
    nearest_int_dist,
)

logger = logging.getLogger(__name__)

CHEBYSHEV_CONSTANT = 3
FIXED_POINT_BITS = 64


def _irrational_part(alpha) -> ExactReal:
    alpha = ExactReal.of(alpha)
    if alpha.is_rational:
        raise NotIrrational(str(alpha) + " is rational")
    return alpha.frac()


def convergent_denominator(alpha, m: int) -> int:
    """q_m of frac(alpha), with q_0 = 1 and q_1 = a_1."""
    alpha = _irrational_part(alpha)
    return cf_expand(alpha, max(m, 1)).q[m]


class ThreeDistanceVerdict:
    def __init__(self, q: int, holds: bool, empty: list[int], crowded: list[int]):
        self.q = q
        self.holds = holds
        self.empty = empty
        self.crowded = crowded

    def to_json(self) -> dict:
        return {
            "q": self.q,
            "holds": self.holds,
            "empty_cells": self.empty,
            "crowded_cells": self.crowded,
        }


def three_distance_check(alpha, m: int) -> ThreeDistanceVerdict:
    """

    Every open cell (r/q, (r+1)/q), r < q = q_m, holds exactly one of the points
    k alpha mod 1, 1 <= k <= q. Cells are found with exact floors.

    """

    alpha = _irrational_part(alpha)
    q = convergent_denominator(alpha, m)
    counts = [0] * q
    point = ZERO
    for _ in range(q):
        point = (point + alpha).frac()
        counts[(point * q).floor()] += 1

    empty = [r for r, count in enumerate(counts) if count == 0]
    crowded = [r for r, count in enumerate(counts) if count > 1]
    return ThreeDistanceVerdict(q, not empty and not crowded, empty, crowded)


class KestenCounts:
    """
    The values of x -> #{0 <= k < q : x + k alpha mod 1 in [a, b)} over x in [0, 1).
    """

    def __init__(self, q: int, window: tuple[ExactReal, ExactReal], values: list[int]):
        self.q = q
        self.window = window
        self.values = values

    @property
    def b(self) -> int:
        return max(self.values)

    @property
    def consecutive(self) -> bool:
        return max(self.values) - min(self.values) + 1 == len(self.values)

    @property
    def bracket(self) -> tuple[int, int]:
        centre = ((self.window[1] - self.window[0]) * self.q).floor()
        return centre - 1, centre + 2

    @property
    def holds(self) -> bool:
        low, high = self.bracket
        return (
            self.consecutive
            and len(self.values) <= 4
            and low <= min(self.values)
            and max(self.values) <= high
        )

    def to_json(self) -> dict:
        return {
            "q": self.q,
            "window": [str(self.window[0]), str(self.window[1])],
            "count_set": self.values,
            "b": self.b,
            "bracket": list(self.bracket),
            "consecutive": self.consecutive,
            "holds": self.holds,
        }


def window_counts(alpha, a, b, q: int) -> KestenCounts:
    """

    Exact sweep over x: the k-th point falls in [a, b) for x in the arc
    [a - k alpha, b - k alpha) mod 1, so the count only changes at the arc ends.

    """

    alpha = _irrational_part(alpha)
    a, b = ExactReal.of(a), ExactReal.of(b)
    if not ZERO <= a < b <= ONE:
        raise DomainError("Window must satisfy 0 <= a < b <= 1")
    if b - a == ONE:
        return KestenCounts(q, (a, b), [q])

    events: dict[ExactReal, int] = {}
    initial = 0
    shift = ZERO
    for _ in range(q):
        start = (a - shift).frac()
        end = (b - shift).frac()
        events[start] = events.get(start, 0) + 1
        if end != ZERO:
            events[end] = events.get(end, 0) - 1
        if start > end and end != ZERO:
            initial += 1
        shift = (shift + alpha).frac()

    values = set()
    count = initial
    if ZERO not in events:
        values.add(count)
    for point in sorted(events):
        count += events[point]
        values.add(count)
    return KestenCounts(q, (a, b), sorted(values))


def kesten_window_counts(alpha, a, b, m: int) -> KestenCounts:
    counts = window_counts(alpha, a, b, convergent_denominator(alpha, m))
    if not counts.holds:
        logger.info(
            "Window counts %s for [%s, %s) at q = %s leave the bracket %s",
            counts.values,
            a,
            b,
            counts.q,
            counts.bracket,
        )
    return counts


class ChebyshevResult:
    def __init__(
        self,
        x,
        y,
        running_min: float,
        argmin: int,
        window_min: float,
        window_argmin: int,
    ):
        self.x = x
        self.y = y
        self.running_min = running_min
        self.argmin = argmin
        self.window_min = window_min
        self.window_argmin = window_argmin

    @property
    def holds(self) -> bool:
        return self.running_min < CHEBYSHEV_CONSTANT

    def to_json(self) -> dict:
        return {
            "x": str(self.x),
            "y": str(self.y),
            "running_min": self.running_min,
            "argmin": self.argmin,
            "window_min": self.window_min,
            "window_argmin": self.window_argmin,
            "holds": self.holds,
        }


def chebyshev_check(alpha, x, y, horizon: int) -> ChebyshevResult:
    """

    min over 1 <= n <= horizon of n ||n alpha + x - y||, and the same minimum over the
    last block (horizon/2, horizon]. Fixed point nalpha is accurate to n 2^-64; the
    minimum found is re-evaluated exactly.

    """

    alpha = _irrational_part(alpha)
    x, y = CirclePoint.of(x), CirclePoint.of(y)
    shift = (x - y).frac()

    with mpmath.workdps(60):
        scaled = alpha.to_mpf(60) * mpmath.mpf(2) ** FIXED_POINT_BITS
        step = np.uint64(int(mpmath.floor(scaled)))
    n = np.arange(1, horizon + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        fixed = n * step
    positions = fixed.astype(np.float64) / 2.0**FIXED_POINT_BITS + float(shift)
    positions -= np.floor(positions)
    values = n.astype(np.float64) * np.minimum(positions, 1.0 - positions)

    index = int(np.argmin(values))
    middle = horizon // 2
    window_index = middle + int(np.argmin(values[middle:]))

    def exact(i: int) -> float:
        k = i + 1
        return float(nearest_int_dist(alpha * k + shift) * k)

    return ChebyshevResult(
        x, y, exact(index), index + 1, exact(window_index), window_index + 1
    )


def chebyshev_batch(
    alpha, pairs: Sequence[tuple], horizon: int
) -> list[ChebyshevResult]:
    return [chebyshev_check(alpha, x, y, horizon) for x, y in pairs]

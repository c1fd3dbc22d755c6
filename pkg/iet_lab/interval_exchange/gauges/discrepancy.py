from __future__ import annotations

import logging
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from interval_exchange.iet.algebra import invert
from interval_exchange.iet.iet import Iet
from interval_exchange.iet.orbit import ExactOrbit
from interval_exchange.induce.induced_map import split_at_breakpoints
from interval_exchange.utils.error import DomainError
from interval_exchange.utils.exact_real import ONE, ZERO, ExactReal

logger = logging.getLogger(__name__)

MAX_GRID = 12


class DiscrepancyResult:
    """

    sup over x of |#{k < n : T^k x in [a, b)} / n - (b - a)|, maximised over the
    listed windows. `witness` is the left end of a piece of x values attaining it.

    """

    def __init__(
        self,
        value: ExactReal,
        n: int,
        window: tuple[ExactReal, ExactReal],
        witness: ExactReal,
        pieces: int,
        mode: str,
    ):
        self.value = value
        self.n = n
        self.window = window
        self.witness = witness
        self.pieces = pieces
        self.mode = mode

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "value": str(self.value),
            "value_float": float(self.value),
            "window": [str(self.window[0]), str(self.window[1])],
            "witness": str(self.witness),
            "pieces": self.pieces,
            "mode": self.mode,
            "under_approximation": self.mode == "grid",
        }


def _preimage(inverse: Iet, intervals: list) -> list:
    """T^-1 of sorted disjoint intervals, sorted and with touching ends merged."""
    pieces = []
    for left, right in intervals:
        for offset, length, k in split_at_breakpoints(inverse, left, right - left):
            start = left + offset + inverse.translations[k]
            pieces.append((start, start + length))
    pieces.sort(key=lambda piece: piece[0])

    merged = [pieces[0]]
    for left, right in pieces[1:]:
        if left == merged[-1][1]:
            merged[-1] = (merged[-1][0], right)
        else:
            merged.append((left, right))
    return merged


def count_profile(iet: Iet, n: int, a, b) -> list[tuple[ExactReal, int]]:
    """

    The piecewise constant function x -> #{0 <= k < n : T^k x in [a, b)} as a list of
    (left end, count) pairs; each count holds up to the next left end.

    The set of x counted at time k is T^-k [a, b), a finite union of intervals
    obtained by pulling the previous union back once more.

    """

    a, b = ExactReal.of(a), ExactReal.of(b)
    if n < 1:
        raise DomainError("Discrepancy needs n >= 1, got " + str(n))
    if not ZERO <= a < b <= ONE:
        raise DomainError("Window must satisfy 0 <= a < b <= 1")

    inverse = invert(iet.canonical())
    events: dict[ExactReal, int] = {ZERO: 0}
    intervals = [(a, b)]
    for k in range(n):
        if k > 0:
            intervals = _preimage(inverse, intervals)
        for left, right in intervals:
            events[left] = events.get(left, 0) + 1
            if right < ONE:
                events[right] = events.get(right, 0) - 1

    profile = []
    count = 0
    for point in sorted(events):
        count += events[point]
        profile.append((point, count))
    return profile


def discrepancy(iet: Iet, n: int, a, b) -> DiscrepancyResult:
    a, b = ExactReal.of(a), ExactReal.of(b)
    profile = count_profile(iet, n, a, b)
    expected = b - a
    best = None
    for left, count in profile:
        value = abs(ExactReal.of(Fraction(count, n)) - expected)
        if best is None or value > best[0]:
            best = (value, left)
    return DiscrepancyResult(best[0], n, (a, b), best[1], len(profile), "window")


def grid_windows(iet: Iet, grid: int) -> list[tuple[ExactReal, ExactReal]]:
    """
    All [a, b) with a < b on the union of the uniform grid j / grid and the
    breakpoints of T.
    """

    if not 1 <= grid <= MAX_GRID:
        raise DomainError("Grid size must lie in 1.." + str(MAX_GRID))
    points = {ExactReal.rational(j, grid) for j in range(grid + 1)}
    points |= set(iet.breakpoints)
    points = sorted(points)
    return [(a, b) for i, a in enumerate(points) for b in points[i + 1 :]]


def grid_discrepancy(iet: Iet, n: int, grid: int) -> DiscrepancyResult:
    """
    Maximum over the grid windows: a lower bound for the sup over all windows.
    """

    best = None
    for a, b in grid_windows(iet, grid):
        result = discrepancy(iet, n, a, b)
        if best is None or result.value > best.value:
            best = result
    best.mode = "grid"
    return best


def sampled_discrepancy(iet: Iet, n: int, a, b, points: Iterable) -> ExactReal:
    """
    max over the given x of the exact orbit discrepancy.
    """

    a, b = ExactReal.of(a), ExactReal.of(b)
    best = ZERO
    for x in points:
        walker = ExactOrbit(iet, x)
        point = walker.point
        count = 0
        for k in range(n):
            if k:
                walker.step()
                point = walker.point
            if a <= point < b:
                count += 1
        best = max(best, abs(ExactReal.of(Fraction(count, n)) - (b - a)))
    return best


class OmegaEstimate:
    def __init__(self, omega_hat: float, slope: float, table: list[tuple[int, float]]):
        self.omega_hat = omega_hat
        self.slope = slope
        self.table = table

    def to_json(self) -> dict:
        return {
            "omega_hat": self.omega_hat,
            "slope": self.slope,
            "table": [{"n": n, "discrepancy": value} for n, value in self.table],
            "estimate": "finite-horizon",
        }


def omega_discrepancy(
    iet: Iet,
    n_list: Sequence[int],
    windows: Sequence[tuple] | None = None,
) -> OmegaEstimate:
    """

    omega = 1 + slope of the least-squares line through (log n, log D_n), clamped to
    [0, 1]. D_n is maximised over `windows` (default [0, 1/2)).

    """

    n_list = sorted(set(int(n) for n in n_list))
    if len(n_list) < 2:
        raise DomainError("omega_discrepancy needs at least two horizons")
    if windows is None:
        windows = [(ZERO, ExactReal.rational(1, 2))]

    table = []
    for n in n_list:
        value = max(discrepancy(iet, n, a, b).value for a, b in windows)
        table.append((n, float(value)))

    logs_n = np.log(np.array([n for n, _ in table], dtype=np.float64))
    values = np.array([max(v, 1e-300) for _, v in table], dtype=np.float64)
    slope = float(np.polyfit(logs_n, np.log(values), 1)[0])
    omega_hat = float(min(1.0, max(0.0, 1.0 + slope)))
    logger.debug("omega discrepancy slope %s over %s", slope, n_list)
    return OmegaEstimate(omega_hat, slope, table)

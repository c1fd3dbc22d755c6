from __future__ import annotations

import logging
from typing import Iterable

from interval_exchange.iet.algebra import compose
from interval_exchange.iet.iet import Iet
from interval_exchange.utils.exact_real import ZERO, CirclePoint, ExactReal, circle_sub

logger = logging.getLogger(__name__)


class DeltaSet:
    """
    A finite set of circle points, built up to horizon n (n = 1 for Delta(T)).
    """

    def __init__(self, points: Iterable[CirclePoint], n: int = 1):
        self.__points = frozenset(CirclePoint.of(p) for p in points)
        self.__n = n

    @property
    def points(self) -> frozenset:
        return self.__points

    @property
    def n(self) -> int:
        return self.__n

    def __len__(self) -> int:
        return len(self.__points)

    def __contains__(self, x) -> bool:
        return ExactReal.of(x) in self.__points

    def __iter__(self):
        return iter(sorted(self.__points))

    def issubset(self, other: DeltaSet) -> bool:
        return self.__points <= other.points

    def to_json(self) -> dict:
        return {"n": self.__n, "points": [str(p) for p in sorted(self.__points)]}


def _translation_points(iet: Iet) -> set:
    return {CirclePoint.of(h.frac()) for h in iet.translations}


def _differences(points: set) -> set:
    return {circle_sub(x, y) for x in points for y in points}


def delta_set(iet: Iet) -> DeltaSet:
    """
    Delta(T) = {T(x) - x mod 1 : x in [0, 1)}, the translations reduced mod 1.
    """

    return DeltaSet(_translation_points(iet), 1)


def delta_prime(iet: Iet) -> DeltaSet:
    return DeltaSet(_differences(_translation_points(iet)), 1)


def delta_prime_ladder(iet: Iet, n_values: Iterable[int]) -> list[tuple[int, int]]:
    """

    Cardinalities of Delta'_n(T) for every n in n_values, computed in one pass over
    the powers T, T^2, ..., T^max(n_values).

    """

    wanted = sorted(set(n_values))
    if not wanted or wanted[0] < 1:
        raise ValueError("Ladder entries must be >= 1")

    table = []
    points = {CirclePoint.of(ZERO)}
    power = iet.canonical()
    for k in range(1, wanted[-1] + 1):
        if k > 1:
            power = compose(iet, power)
        points |= _differences(_translation_points(power))
        if k in wanted:
            table.append((k, len(points)))
            logger.debug("card Delta'_%s = %s", k, len(points))
    return table


def delta_prime_n(iet: Iet, n: int) -> DeltaSet:
    """
    Delta'_n(T), the union of the pairwise differences of Delta(T^k) for k <= n.
    """

    if n < 1:
        raise ValueError("delta_prime_n needs n >= 1, got " + str(n))

    points = set()
    power = iet.canonical()
    for k in range(1, n + 1):
        if k > 1:
            power = compose(iet, power)
        points |= _differences(_translation_points(power))
    return DeltaSet(points, n)

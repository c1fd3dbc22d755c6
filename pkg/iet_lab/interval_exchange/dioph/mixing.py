from __future__ import annotations

import logging
import math
from typing import Sequence

from interval_exchange.dioph.kesten import convergent_denominator, window_counts
from interval_exchange.iet.algebra import power
from interval_exchange.iet.iet import Iet, rotation
from interval_exchange.induce.induced_map import first_return
from interval_exchange.utils.error import BadLengths, NotIrrational
from interval_exchange.utils.exact_real import ONE, ZERO, ExactReal

logger = logging.getLogger(__name__)

DEFAULT_CELLS = 20
MAX_DISPLACEMENTS = 7


class MixingTime:
    """
    The map T^time, time = q - 1 - b, against the cells [i/cells, (i+1)/cells).
    """

    def __init__(
        self,
        m: int,
        q: int,
        b: int,
        time: int,
        hit: list[list[int]],
        displacements: list[ExactReal],
        rotation_times: list[int],
    ):
        self.m = m
        self.q = q
        self.b = b
        self.time = time
        self.hit = hit
        self.displacements = displacements
        self.rotation_times = rotation_times

    @property
    def cells(self) -> int:
        return len(self.hit)

    @property
    def missed(self) -> list[int]:
        return [self.cells - len(cells) for cells in self.hit]

    @property
    def min_missed(self) -> int:
        return min(self.missed)

    @property
    def rotation_times_consecutive(self) -> bool:
        times = self.rotation_times
        return times[-1] - times[0] + 1 == len(times)

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "q": self.q,
            "b": self.b,
            "time": self.time,
            "hit": self.hit,
            "missed": self.missed,
            "min_missed": self.min_missed,
            "displacements": [str(h) for h in self.displacements],
            "displacement_count": len(self.displacements),
            "rotation_times": self.rotation_times,
            "rotation_times_consecutive": self.rotation_times_consecutive,
        }


class MixingReport:
    def __init__(
        self,
        alpha: ExactReal,
        t: ExactReal,
        iet: Iet,
        cells: int,
        times: list,
        skipped: list[dict] | None = None,
    ):
        self.alpha = alpha
        self.t = t
        self.iet = iet
        self.cells = cells
        self.times = times
        # m with q_m - 1 - b_m < 0, no valid time
        self.skipped = skipped or []

    @property
    def missed_counts(self) -> list[int]:
        return [entry.min_missed for entry in self.times]

    @property
    def holds(self) -> bool:
        """Six or more cells missed and at most seven displacements at every time."""
        return all(
            entry.min_missed >= min(6, self.cells - 1)
            and len(entry.displacements) <= MAX_DISPLACEMENTS
            for entry in self.times
        )

    def to_json(self) -> dict:
        return {
            "alpha": str(self.alpha),
            "t": str(self.t),
            "iet": self.iet.to_json(),
            "cells": self.cells,
            "missed_counts": self.missed_counts,
            "times": [entry.to_json() for entry in self.times],
            "skipped": self.skipped,
        }


def _cells_hit(power_map: Iet, cells: int) -> list[list[int]]:
    hit = [set() for _ in range(cells)]
    starts = power_map.breakpoints
    for k in range(power_map.r):
        left, right = starts[k], starts[k + 1]
        h = power_map.translations[k]
        first = (left * cells).floor()
        last = min(cells - 1, math.ceil(right * cells) - 1)
        for i in range(first, last + 1):
            low = max(left, ExactReal.rational(i, cells))
            high = min(right, ExactReal.rational(i + 1, cells))
            if low >= high:
                continue
            image_low, image_high = low + h, high + h
            target_first = (image_low * cells).floor()
            target_last = math.ceil(image_high * cells) - 1
            hit[i].update(range(target_first, target_last + 1))
    return [sorted(cell) for cell in hit]


def _rotation_time(displacement: ExactReal, alpha: ExactReal, t: ExactReal) -> int:
    """N with t * displacement = N alpha - j for an integer j."""
    shift = displacement * t
    n = shift.b / alpha.b
    if n.denominator != 1:
        raise ValueError(
            "Displacement " + str(displacement) + " is not a rotation time"
        )
    return int(n)


def mixing_falsifier(
    alpha,
    t,
    m_range: Sequence[int],
    cells: int = DEFAULT_CELLS,
) -> MixingReport:
    """

    T is R_alpha induced on [1 - t, 1) and rescaled to [0, 1). For each m the time
    q_m - 1 - b_m uses the largest count b_m of the orbit segment
    x, x + alpha, ..., x + (q_m - 1) alpha in the complement [0, 1 - t), so that
    T^time x is R^N x for at most seven consecutive N.

    """

    alpha = ExactReal.of(alpha)
    t = ExactReal.of(t)
    if alpha.is_rational:
        raise NotIrrational(str(alpha) + " is rational")
    alpha = alpha.frac()
    if t.sign() <= 0 or t >= ONE:
        raise BadLengths("t must lie in (0, 1), got " + str(t))
    if cells < 1:
        raise BadLengths("cells must be positive")

    induced = first_return(rotation(alpha), ONE - t, ONE)
    iet = induced.iet

    times = []
    skipped = []
    for m in m_range:
        q = convergent_denominator(alpha, m)
        b = window_counts(alpha, ZERO, ONE - t, q).b
        time = q - 1 - b
        if time < 0:
            logger.warning("No valid time at m = %s: q_m - 1 - b_m = %s", m, time)
            skipped.append({"m": m, "q": q, "b": b, "time": time})
            continue

        power_map = power(iet, time)
        displacements = sorted(set(power_map.translations))
        rotation_times = sorted({_rotation_time(h, alpha, t) for h in displacements})
        entry = MixingTime(
            m, q, b, time, _cells_hit(power_map, cells), displacements, rotation_times
        )
        logger.debug(
            "m = %s: time %s, %s displacements, missed %s",
            m,
            time,
            len(displacements),
            entry.min_missed,
        )
        times.append(entry)

    return MixingReport(alpha, t, iet, cells, times, skipped)

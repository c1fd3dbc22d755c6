from __future__ import annotations

import logging

from interval_exchange.iet.algebra import invert
from interval_exchange.iet.iet import Iet
from interval_exchange.iet.keane import keane_certificate
from interval_exchange.induce.induced_map import (
    DEFAULT_MAX_STEPS,
    InducedMap,
    first_return,
    floors,
    intervals_disjoint,
)
from interval_exchange.utils.error import BadLengths, NotMinimal
from interval_exchange.utils.exact_real import ONE, ZERO, ExactReal

logger = logging.getLogger(__name__)

CANDIDATE_ORBIT_DEPTH = 128
MAX_CANDIDATES = 24


class Tower:
    """
    A Rohlin tower: base J = [left, right) and its N images J, T(J), ..., T^{N-1}(J).
    """

    def __init__(
        self,
        left: ExactReal,
        right: ExactReal,
        height: int,
        levels: list,
        columns: int,
    ):
        self.left = left
        self.right = right
        self.height = height
        self.levels = levels
        self.columns = columns

    @property
    def base_length(self) -> ExactReal:
        return self.right - self.left

    @property
    def measure(self) -> ExactReal:
        return self.base_length * self.height

    def floors_disjoint(self) -> bool:
        return intervals_disjoint(self.levels)

    def floors_equal_length(self) -> bool:
        return all(right - left == self.base_length for left, right in self.levels)

    def to_json(self) -> dict:
        return {
            "base": [str(self.left), str(self.right)],
            "height": self.height,
            "measure": str(self.measure),
            "induced_intervals": self.columns,
            "floors": [[str(left), str(right)] for left, right in self.levels],
        }


def _candidate_cuts(iet: Iet, eps: ExactReal) -> list[ExactReal]:
    """
    Right endpoints c in (0, eps): eps / 2 and points of the forward and backward
    orbits of 0 and of the discontinuities.
    """

    inverse = invert(iet)
    seeds = (ZERO,) + iet.discontinuities
    candidates = {eps / 2}
    for seed in seeds:
        for walker in (iet, inverse):
            x = seed
            for _ in range(CANDIDATE_ORBIT_DEPTH):
                x = walker.evaluate(x)
                if ZERO < x < eps:
                    candidates.add(x)
    return sorted(candidates, reverse=True)[:MAX_CANDIDATES]


def find_tower(
    iet: Iet,
    eps,
    keane_depth: int = 1000,
    max_steps: int = DEFAULT_MAX_STEPS,
) -> Tower:
    """

    Builds a tower with base length below eps covering at least 1/s of [0, 1), where
    s is the interval count of the induced map it is cut from.

    T is induced on [0, c) for several cuts c < eps; the cut with the fewest induced
    intervals wins (largest c on ties) and the column maximising N_k |I_k| becomes
    the tower. Raises NotMinimal if the Keane check finds a connection.

    """

    eps = ExactReal.of(eps)
    if eps.sign() <= 0 or eps >= ONE:
        raise BadLengths("eps must lie in (0, 1), got " + str(eps))

    verdict = keane_certificate(iet, keane_depth)
    if verdict.violated:
        raise NotMinimal(verdict)

    canonical = iet.canonical()
    best: InducedMap | None = None
    for c in _candidate_cuts(canonical, eps):
        induced = first_return(canonical, ZERO, c, max_steps=max_steps)
        if best is None or len(induced.columns) < len(best.columns):
            best = induced

    index = max(
        range(len(best.columns)),
        key=lambda k: best.columns[k].length * best.columns[k].return_time,
    )
    column = best.columns[index]
    levels = [
        (left, right) for k, _, left, right in floors(best) if k == index
    ]

    tower = Tower(
        column.left, column.right, column.return_time, levels, len(best.columns)
    )
    logger.info(
        "Tower of height %s over a base of length %.3e, %s induced intervals",
        tower.height,
        float(tower.base_length),
        tower.columns,
    )
    return tower

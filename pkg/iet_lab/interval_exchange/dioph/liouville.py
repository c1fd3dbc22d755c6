from __future__ import annotations

import logging

from interval_exchange.dioph.continued_fraction import (
    ContinuedFraction,
    periodic_cf_value,
)
from interval_exchange.gauges.scale_sequence import ScaleSequence
from interval_exchange.utils.error import DomainError, ScaleTooSlow
from interval_exchange.utils.exact_real import ExactReal

logger = logging.getLogger(__name__)

FEASIBLE_LIMIT = 10**12
GOLDEN_TAIL = (1,)


class LiouvilleConstruction:
    """

    Partial quotients a_k = max(N_k, 3k^2), k = 1..K, where N_k is the first index
    from which s_n / n >= k^4, with the convergent denominators q_0..q_K and
    m_k = q_{k+1} // k^2 for k = 1..K-1.

    `alpha` continues the expansion with partial quotients 1, which keeps it a
    quadratic irrational sharing the first K convergents.

    """

    def __init__(
        self, scale: ScaleSequence, n: list[int], a: list[int], feasible_limit: int
    ):
        self.scale = scale
        self.n = n
        self.a = a
        self.cf = ContinuedFraction(a)
        self.q = list(self.cf.q)
        self.m = [self.q[k + 1] // k**2 for k in range(1, len(a))]
        self.feasible_limit = feasible_limit

    @property
    def depth(self) -> int:
        return len(self.a)

    @property
    def chain_holds(self) -> list[bool]:
        """q_{k+1} >= m_k >= 3 q_k for k = 1..K-1."""
        return [
            self.q[k + 1] >= self.m[k - 1] >= 3 * self.q[k]
            for k in range(1, self.depth)
        ]

    @property
    def quotients_hold(self) -> list[bool]:
        return [a_k >= 3 * k**2 for k, a_k in enumerate(self.a, start=1)]

    @property
    def feasible(self) -> bool:
        return self.q[-1] <= self.feasible_limit

    def alpha(self) -> ExactReal:
        return periodic_cf_value(self.a, GOLDEN_TAIL)

    def to_json(self) -> dict:
        return {
            "scale": self.scale.spec(),
            "K": self.depth,
            "N": self.n,
            "a": self.a,
            "q": self.q,
            "m": self.m,
            "chain_holds": self.chain_holds,
            "quotients_hold": self.quotients_hold,
            "feasible": self.feasible,
            "feasible_limit": self.feasible_limit,
            "tail": list(GOLDEN_TAIL),
        }


def liouville_from_scale(
    s: ScaleSequence, depth: int, feasible_limit: int = FEASIBLE_LIMIT
) -> LiouvilleConstruction:
    """
    Raises ScaleTooSlow unless s_n / n tends to infinity.
    """

    if depth < 1:
        raise DomainError("The construction needs K >= 1")
    if not s.ratio_diverges():
        raise ScaleTooSlow(s.spec() + ": s_n / n does not tend to infinity")

    n = []
    a = []
    for k in range(1, depth + 1):
        n_k = s.threshold_index(k**4)
        n.append(n_k)
        a.append(max(n_k, 3 * k**2))

    construction = LiouvilleConstruction(s, n, a, feasible_limit)
    if not construction.feasible:
        logger.info(
            "Liouville construction for %s: q_%s has %s digits, "
            "beyond the feasible limit",
            s.spec(),
            depth,
            len(str(construction.q[-1])),
        )
    return construction

from __future__ import annotations

import logging
import math
from typing import Sequence

import numpy as np

from interval_exchange.gauges.discrepancy import omega_discrepancy
from interval_exchange.gauges.scale_sequence import ScaleSequence
from interval_exchange.iet.delta_sets import delta_prime_ladder
from interval_exchange.iet.iet import Iet
from interval_exchange.utils.error import DomainError

logger = logging.getLogger(__name__)


def dyadic_ladder(n_max: int) -> list[int]:
    ladder = []
    n = 1
    while n < n_max:
        ladder.append(n)
        n *= 2
    ladder.append(n_max)
    return ladder


class TauEstimate:
    def __init__(self, tau_hat: float, table: list[tuple[int, int]]):
        self.tau_hat = tau_hat
        self.table = table

    def slope(self, low: int, high: int) -> float:
        """Least-squares slope of log card against log n over low <= n <= high."""
        points = [(n, card) for n, card in self.table if low <= n <= high]
        if len(points) < 2:
            raise DomainError(
                "Need two ladder entries in [" + str(low) + ", " + str(high) + "]"
            )
        x = np.log(np.array([n for n, _ in points], dtype=np.float64))
        y = np.log(np.array([card for _, card in points], dtype=np.float64))
        return float(np.polyfit(x, y, 1)[0])

    def to_json(self) -> dict:
        return {
            "tau_hat": self.tau_hat,
            "table": [{"n": n, "card": card} for n, card in self.table],
            "estimate": "finite-horizon",
        }


def tau_entropy(
    iet: Iet, n_max: int, ladder: Sequence[int] | None = None
) -> TauEstimate:
    """

    card(Delta'_n(T)) along a dyadic ladder up to n_max, and
    tau_hat = max of log card / log n over the upper half of the ladder.

    """

    if n_max < 2:
        raise DomainError("tau_entropy needs n_max >= 2")
    ladder = sorted(set(ladder)) if ladder is not None else dyadic_ladder(n_max)
    table = delta_prime_ladder(iet, ladder)

    upper = [(n, card) for n, card in table[len(table) // 2 :] if n >= 2]
    tau_hat = max(math.log(card) / math.log(n) for n, card in upper)
    logger.debug("tau entropy table %s, tau_hat %s", table, tau_hat)
    return TauEstimate(tau_hat, table)


class SummabilityReport:
    def __init__(self, terms: list[tuple[int, float]], partial_sums: list[float]):
        self.terms = terms
        self.partial_sums = partial_sums

    def to_json(self) -> dict:
        return {
            "terms": [{"k": k, "v": v} for k, v in self.terms],
            "partial_sums": self.partial_sums,
        }


def psi_summability(iet: Iet, s: ScaleSequence, j_max: int) -> SummabilityReport:
    """

    v_k = card(Delta'_{2k}) / s_k at k = 2^j, j = 0..j_max, with the partial sums of
    v_{2^j}. Convergent sums make the proximality gauge infinite almost everywhere.

    """

    ks = [2**j for j in range(j_max + 1) if 2**j >= s.first_index]
    if not ks:
        raise DomainError("No ladder index reaches the first index of the scale")
    cards = dict(delta_prime_ladder(iet, [2 * k for k in ks]))

    terms = []
    partial_sums = []
    total = 0.0
    for k in ks:
        v = cards[2 * k] / s.value(k)
        total += v
        terms.append((k, v))
        partial_sums.append(total)
    return SummabilityReport(terms, partial_sums)


def tau_omega_bound(
    iet: Iet, n_max: int, n_list: Sequence[int], tolerance: float = 0.05
) -> dict:
    """
    Compares tau_hat with (r - 1) omega_hat; both are finite-horizon estimates.
    """

    tau = tau_entropy(iet, n_max)
    omega = omega_discrepancy(iet, n_list)
    bound = (iet.canonical().r - 1) * omega.omega_hat
    return {
        "tau_hat": tau.tau_hat,
        "omega_hat": omega.omega_hat,
        "bound": bound,
        "holds": tau.tau_hat <= bound + tolerance,
    }

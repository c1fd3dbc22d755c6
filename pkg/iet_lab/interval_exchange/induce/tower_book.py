from __future__ import annotations

import logging
import math
from fractions import Fraction
from typing import Callable, Sequence

import mpmath

from interval_exchange.iet.iet import Iet
from interval_exchange.utils.error import BadLengths

logger = logging.getLogger(__name__)

# (previous row b_{k,1..4}, m_{k+1}, n_{k+1}) -> (b_{k+1,1}, b_{k+1,3}, b_{k+1,4})
UpdateRule = Callable[[tuple, int, int], tuple]


def permuted_rule(row: tuple, m_next: int, n_next: int) -> tuple:
    """
    Heuristic: the visit pattern of tower 2 with the roles of the towers permuted.
    """

    b1, b2, b3, b4 = row
    return b1 + b2, b4 + n_next * b3, b3 + b2


def frozen_rule(row: tuple, m_next: int, n_next: int) -> tuple:
    b1, _, b3, b4 = row
    return b1, b3, b4


RULES: dict[str, UpdateRule] = {
    "permuted": permuted_rule,
    "frozen": frozen_rule,
}


class SequenceMode:
    WINDOW = "window"
    GROWTH = "growth"


class TowerBook:
    """

    Integer bookkeeping of the four Kakutani-Rokhlin towers of a 4-IET induction.

    Row k holds b_{k,1..4}, the number of floors of tower j at step k. Row 1 is the
    seed; later rows follow b_{k+1,2} = b_{k,4} + m_{k+1} b_{k,2} + n_{k+1} b_{k,3}
    and the update rule for the other towers. Indices in the public tables are
    1-based like the step index k.

    """

    def __init__(
        self,
        m: Sequence[int],
        n: Sequence[int],
        seed_b: Sequence[int],
        rule: str = "permuted",
        radius: int = 1,
    ):
        if len(m) != len(n) or len(m) < 2:
            raise BadLengths("m and n need equal length K >= 2")
        if len(seed_b) != 4:
            raise BadLengths("The seed row needs four entries")
        if any(int(x) <= 0 for x in list(m) + list(n) + list(seed_b)):
            raise BadLengths("Tower book entries must be positive integers")
        if rule not in RULES:
            raise ValueError("Unknown update rule '" + str(rule) + "'")

        self.m = tuple(int(x) for x in m)
        self.n = tuple(int(x) for x in n)
        self.rule = rule
        self.radius = radius

        rows = [tuple(int(x) for x in seed_b)]
        for k in range(1, len(self.m)):
            previous = rows[-1]
            b2 = previous[3] + self.m[k] * previous[1] + self.n[k] * previous[2]
            b1, b3, b4 = RULES[rule](previous, self.m[k], self.n[k])
            rows.append((b1, b2, b3, b4))
        self.rows = rows

    @property
    def depth(self) -> int:
        return len(self.m)

    def b(self, k: int, j: int) -> int:
        return self.rows[k - 1][j - 1]

    def conditions(self) -> list[dict]:
        """
        Per-k flags; None where a condition does not apply to k.
        """

        m = lambda k: self.m[k - 1]
        n = lambda k: self.n[k - 1]
        b = self.b
        flags = []
        for k in range(1, self.depth + 1):
            entry = {"k": k, "cond1": n(k) ** 3 < m(k)}
            entry["cond2"] = (
                b(k - 1, 2) ** 2 < m(k) < b(k - 1, 2) ** 5 if k >= 2 else None
            )
            entry["cond3"] = (
                b(k, 2) ** 2 * 2 ** (2 * k) * m(k) < n(k + 1)
                if k < self.depth
                else None
            )
            entry["cons1"] = all(b(k, 2) >= b(k, j) for j in range(1, 5))
            entry["cons2"] = (
                b(k - 1, 2) ** 3 < b(k + 1, 2) < 4 * b(k - 1, 2) ** 6
                if 2 <= k < self.depth
                else None
            )
            entry["cons2_adjacent"] = (
                b(k, 2) ** 3 < b(k + 1, 2) < 4 * b(k, 2) ** 6
                if k < self.depth
                else None
            )
            flags.append(entry)
        return flags

    def violations(self) -> list[str]:
        result = []
        for entry in self.conditions():
            for name, value in entry.items():
                if value is False:
                    result.append(name + "@k=" + str(entry["k"]))
        return result

    def series(self) -> dict:
        """

        Terms of the two series whose convergence the construction needs,
        n_{k+1} b_{k,3} / b_{k+1,2} and n_k / m_k, with partial sums and a check
        that each term is at most half the previous one.

        """

        first = [
            Fraction(self.n[k] * self.b(k, 3), self.b(k + 1, 2))
            for k in range(1, self.depth)
        ]
        second = [
            Fraction(self.n[k - 1], self.m[k - 1]) for k in range(1, self.depth + 1)
        ]
        return {
            "visits": _series_summary(first),
            "ratios": _series_summary(second),
        }

    def conv_bound(self) -> list[dict]:
        """

        The measure bound for A_{x,r,b_{k,2},b_{k+1,2}} at a (k+1)-good x:
        4/(n_{k+1}b_{k,3}) + 2/b_{k,2}^2 + 2r b_{k-1,2}/b_{k,2}
        + 7 ln(b_{k,2}) (n_k b_{k-1,3} + b_{k-1,4})/b_{k,2}, for 2 <= k < K.

        """

        b = self.b
        result = []
        partial = mpmath.mpf(0)
        for k in range(2, self.depth):
            b_k2 = mpmath.mpf(b(k, 2))
            term = (
                mpmath.mpf(4) / (self.n[k] * b(k, 3))
                + 2 / b_k2**2
                + 2 * self.radius * b(k - 1, 2) / b_k2
                + 7
                * mpmath.log(b_k2)
                * (self.n[k - 1] * b(k - 1, 3) + b(k - 1, 4))
                / b_k2
            )
            partial += term
            result.append({"k": k, "term": float(term), "partial_sum": float(partial)})
        return result

    def k_good(self) -> list[dict]:
        """

        Proportion of the images of tower 2 at step k+1 that are not k-good, against
        its summable upper bound (n_{k+1} + 1) / m_{k+1}, and the two horizons of the
        definition: b_{k,2} and (n_k b_{k-1,3})^2.

        """

        b = self.b
        result = []
        for k in range(1, self.depth):
            visits = self.n[k] * b(k, 3)
            bad = Fraction(visits + b(k, 4) + visits**2, b(k + 1, 2))
            bound = Fraction(self.n[k] + 1, self.m[k])
            result.append(
                {
                    "k": k,
                    "bad_fraction": bad,
                    "bound": bound,
                    "holds": bad < bound,
                    "horizon_tower": b(k, 2),
                    "horizon_previous": (
                        (self.n[k - 1] * b(k - 1, 3)) ** 2 if k >= 2 else None
                    ),
                }
            )
        return result

    def to_json(self) -> dict:
        return {
            "m": list(self.m),
            "n": list(self.n),
            "rule": self.rule,
            "radius": self.radius,
            "b": [list(row) for row in self.rows],
            "flags": self.conditions(),
            "series": {
                name: {
                    "terms": [str(t) for t in summary["terms"]],
                    "partial_sums": [float(s) for s in summary["partial_sums"]],
                    "terms_halving": summary["terms_halving"],
                }
                for name, summary in self.series().items()
            },
            "conv_bound": self.conv_bound(),
            "k_good": [
                {
                    **entry,
                    "bad_fraction": float(entry["bad_fraction"]),
                    "bound": float(entry["bound"]),
                }
                for entry in self.k_good()
            ],
        }


def _series_summary(terms: list[Fraction]) -> dict:
    partial_sums = []
    total = Fraction(0)
    for term in terms:
        total += term
        partial_sums.append(total)
    return {
        "terms": terms,
        "partial_sums": partial_sums,
        "terms_halving": all(b * 2 <= a for a, b in zip(terms, terms[1:])),
    }


def tower_book(
    m: Sequence[int],
    n: Sequence[int],
    seed_b: Sequence[int],
    rule: str = "permuted",
    radius: int = 1,
) -> TowerBook:
    book = TowerBook(m, n, seed_b, rule=rule, radius=radius)
    violations = book.violations()
    if violations:
        logger.info("Tower book conditions not met: %s", ", ".join(violations))
    return book


def generate_sequence(
    depth: int,
    seed_b: Sequence[int] = (1, 4, 1, 1),
    mode: str = SequenceMode.WINDOW,
    rule: str = "permuted",
) -> tuple[list[int], list[int]]:
    """

    Builds (m, n) step by step from the growing book.

    The three conditions cannot hold together (condition 3 at k and condition 1 at
    k+1 force m_{k+1} > b_{k,2}^6). 'window' meets conditions 1 and 2 with
    m_k = B^3, n_k = isqrt(B) for B = b_{k-1,2}; 'growth' meets conditions 1 and 3.

    """

    if depth < 2:
        raise ValueError("depth must be >= 2")

    m, n = [8], [1]
    rows = [tuple(int(x) for x in seed_b)]
    for k in range(2, depth + 1):
        previous = rows[-1]
        big = previous[1]
        if mode == SequenceMode.WINDOW:
            if big < 2:
                raise ValueError("window mode needs b_{1,2} >= 2")
            m_k, n_k = big**3, max(1, math.isqrt(big))
        elif mode == SequenceMode.GROWTH:
            n_k = previous[1] ** 2 * 2 ** (2 * (k - 1)) * m[-1] + 1
            m_k = n_k**3 + 1
        else:
            raise ValueError("Unknown sequence mode '" + str(mode) + "'")
        m.append(m_k)
        n.append(n_k)
        b2 = previous[3] + m_k * previous[1] + n_k * previous[2]
        b1, b3, b4 = RULES[rule](previous, m_k, n_k)
        rows.append((b1, b2, b3, b4))
    return m, n


def renormalized_lengths(leb: Sequence, sing: Sequence, p) -> list[Fraction]:
    """
    p * leb + (1 - p) * sing, componentwise; both inputs are length vectors.
    """

    leb = [Fraction(x) for x in leb]
    sing = [Fraction(x) for x in sing]
    p = Fraction(p)
    if len(leb) != 4 or len(sing) != 4:
        raise BadLengths("Length vectors of a 4-IET need four entries")
    for vector in (leb, sing):
        if any(x < 0 for x in vector) or sum(vector) != 1:
            raise BadLengths("Length vectors must be nonnegative and sum to 1")
    if not 0 <= p <= 1:
        raise BadLengths("p must lie in [0, 1], got " + str(p))
    return [p * a + (1 - p) * b for a, b in zip(leb, sing)]


# interval k lands at image position perm[k-1]
RENORMALIZED_PERM = (4, 2, 1, 3)


def renormalized_iet(leb: Sequence, sing: Sequence, p) -> Iet:
    lengths = renormalized_lengths(leb, sing, p)
    if any(x == 0 for x in lengths):
        raise BadLengths("Renormalised lengths must be positive to form an IET")
    return Iet(lengths, RENORMALIZED_PERM)

from __future__ import annotations

import logging
import math
from fractions import Fraction
from typing import Sequence

import mpmath

from interval_exchange.utils.error import DomainError, RationalInput
from interval_exchange.utils.exact_real import ExactReal, nearest_int_dist

logger = logging.getLogger(__name__)


class ContinuedFraction:
    """

    Partial quotients a_1..a_K of alpha = [0; a_1, a_2, ...] with the convergents
    p_k / q_k, k = 0..K, where p_0 = 0, q_0 = 1, p_1 = 1, q_1 = a_1 and
    x_k = a_k x_{k-1} + x_{k-2}.

    `preperiod` and `period` are set when the expansion was found to be eventually
    periodic: a_{preperiod+1}, ... repeats with the given period.

    """

    def __init__(
        self,
        a: Sequence[int],
        alpha: ExactReal | None = None,
        preperiod: int | None = None,
        period: tuple[int, ...] | None = None,
    ):
        a = tuple(int(x) for x in a)
        if any(x < 1 for x in a):
            raise DomainError("Partial quotients must be positive integers")

        p = [0]
        q = [1]
        p_previous, q_previous = 1, 0
        for a_k in a:
            p_next = a_k * p[-1] + p_previous
            q_next = a_k * q[-1] + q_previous
            p_previous, q_previous = p[-1], q[-1]
            p.append(p_next)
            q.append(q_next)

        self.a = a
        self.p = tuple(p)
        self.q = tuple(q)
        self.alpha = alpha
        self.preperiod = preperiod
        self.period = period

    @property
    def depth(self) -> int:
        return len(self.a)

    def convergent(self, k: int) -> Fraction:
        return Fraction(self.p[k], self.q[k])

    def partial_quotient(self, k: int) -> int:
        """
        a_k for any k >= 1, using the period beyond the computed depth.
        """

        if k <= self.depth:
            return self.a[k - 1]
        if self.period is None:
            raise IndexError(
                "Partial quotient " + str(k) + " beyond the computed depth"
            )
        return self.period[(k - self.preperiod - 1) % len(self.period)]

    def to_json(self) -> dict:
        return {
            "alpha": None if self.alpha is None else str(self.alpha),
            "a": list(self.a),
            "p": list(self.p[: self.depth]),
            "q": list(self.q[: self.depth]),
            "preperiod": self.preperiod,
            "period": None if self.period is None else list(self.period),
        }


def cf_expand(alpha, depth: int) -> ContinuedFraction:
    """

    Exact continued fraction of an irrational alpha in (0, 1) via the Gauss map
    x -> 1/x - floor(1/x). Quadratic irrationals are eventually periodic; the first
    repeated state ends the iteration and the period fills the remaining quotients.

    """

    alpha = ExactReal.of(alpha)
    if alpha.sign() <= 0 or alpha >= 1:
        raise DomainError("Continued fractions need alpha in (0, 1), got " + str(alpha))
    if alpha.is_rational:
        raise RationalInput(str(alpha) + " is rational, its expansion terminates")

    a = []
    seen = {}
    x = alpha
    while len(a) < depth:
        if x in seen:
            start = seen[x]
            period = tuple(a[start:])
            while len(a) < depth:
                a.append(period[(len(a) - start) % len(period)])
            logger.debug(
                "Expansion of %s: preperiod %s, period %s", alpha, start, period
            )
            return ContinuedFraction(a, alpha, start, period)
        seen[x] = len(a)
        y = x.inverse()
        a_k = y.floor()
        a.append(a_k)
        x = y - a_k

    return ContinuedFraction(a, alpha)


def check_convergent_ineq(cf: ContinuedFraction, alpha) -> list[tuple[int, bool]]:
    """
    ||alpha q_n|| < 1 / q_{n+1} for n = 0..K-1, exactly.
    """

    alpha = ExactReal.of(alpha)
    return [
        (n, nearest_int_dist(alpha * cf.q[n]) < Fraction(1, cf.q[n + 1]))
        for n in range(cf.depth)
    ]


def convergent_identities(cf: ContinuedFraction, alpha) -> list[dict]:
    """
    |alpha - p_k/q_k| < 1/(q_k q_{k+1}) and p_k q_{k-1} - p_{k-1} q_k = (-1)^(k-1).
    """

    alpha = ExactReal.of(alpha)
    result = []
    for k in range(1, cf.depth):
        error = abs(alpha - cf.convergent(k))
        result.append(
            {
                "k": k,
                "approximation": error < Fraction(1, cf.q[k] * cf.q[k + 1]),
                "determinant": cf.p[k] * cf.q[k - 1] - cf.p[k - 1] * cf.q[k]
                == (-1) ** (k - 1),
            }
        )
    return result


def periodic_cf_value(prefix: Sequence[int], period: Sequence[int]) -> ExactReal:
    """

    The quadratic irrational [0; prefix, period, period, ...].

    The purely periodic tail z solves Q_{L-1} z^2 + (Q_L - P_{L-1}) z - P_L = 0 with
    the convergents P/Q of the period; the prefix convergents then give
    alpha = (p_K + p_{K-1} z) / (q_K + q_{K-1} z).

    """

    if len(period) == 0:
        raise DomainError("The period of an infinite expansion cannot be empty")

    tail = ContinuedFraction(period)
    length = len(period)
    big_p, big_q = tail.p[length], tail.q[length]
    p_before, q_before = tail.p[length - 1], tail.q[length - 1]
    b = big_q - p_before
    discriminant = b * b + 4 * q_before * big_p
    z = ExactReal.quadratic(
        Fraction(-b, 2 * q_before), Fraction(1, 2 * q_before), discriminant
    )

    head = ContinuedFraction(prefix)
    k = head.depth
    if k == 0:
        return z
    return (z * head.p[k - 1] + head.p[k]) / (z * head.q[k - 1] + head.q[k])


def recurrence_constant(cf: ContinuedFraction) -> ExactReal:
    """

    liminf_n q_n ||q_n alpha|| for an eventually periodic expansion, exactly:
    1 / max_j (c_j + [0; c_{j+1}, c_{j+2}, ...] + [0; c_{j-1}, c_{j-2}, ...]) over the
    positions j of the period c.

    """

    if cf.period is None:
        raise DomainError("The recurrence constant needs a periodic expansion")

    period = cf.period
    length = len(period)
    best = None
    for j in range(length):
        forward = [period[(j + 1 + i) % length] for i in range(length)]
        backward = [period[(j - 1 - i) % length] for i in range(length)]
        value = (
            periodic_cf_value([], forward)
            + periodic_cf_value([], backward)
            + period[j]
        )
        if best is None or value > best:
            best = value
    return best.inverse()


class TypeEstimate:
    def __init__(self, nu_hat: float, table: list[tuple[int, float]], n_max: int):
        self.nu_hat = nu_hat
        self.table = table
        self.n_max = n_max

    def to_json(self) -> dict:
        return {
            "nu_hat": self.nu_hat,
            "n_max": self.n_max,
            "convergents": [{"q": q, "exponent": value} for q, value in self.table],
            "estimate": "finite-horizon",
        }


def type_estimate(alpha, n_max: int, dps: int = 60) -> TypeEstimate:
    """

    Finite-horizon surrogate for the irrationality type: the largest
    -log||q alpha|| / log q over convergent denominators q in (sqrt(n_max), n_max].
    Convergents are the only n where the expression peaks.

    """

    alpha = ExactReal.of(alpha)
    if alpha.is_rational:
        raise RationalInput(str(alpha) + " is rational")
    alpha = alpha.frac()

    depth = 8
    cf = cf_expand(alpha, depth)
    while cf.q[-1] <= n_max:
        depth *= 2
        cf = cf_expand(alpha, depth)

    low = math.isqrt(n_max)
    window = [q for q in cf.q if low < q <= n_max and q > 1]
    if not window:
        window = [max(q for q in cf.q if q <= n_max and q > 1)] if n_max > 1 else []
    if not window:
        raise DomainError("n_max too small for a type estimate")

    table = []
    with mpmath.workdps(dps):
        for q in window:
            distance = nearest_int_dist(alpha * q).to_mpf(dps)
            table.append((q, float(-mpmath.log(distance) / mpmath.log(q))))

    nu_hat = max(value for _, value in table)
    return TypeEstimate(nu_hat, table, n_max)

from __future__ import annotations

import logging
import math
from fractions import Fraction
from typing import Sequence

import mpmath
import numpy as np
import sympy

from interval_exchange.utils.error import BadLiteral, ScaleTooSlow

logger = logging.getLogger(__name__)

DEFAULT_EXPR_HORIZON = 1024
STEADY_TOLERANCE = 0.05
TWO_JUMP_MARGIN = 1.05
TWO_JUMP_DECAY = 0.9


class ScaleFlags:
    def __init__(
        self,
        monotone: bool,
        steady: bool,
        two_jumpy: bool,
        bounded_ratio: bool,
        certified: str,
        horizon: int | None = None,
    ):
        self.monotone = monotone
        self.steady = steady
        self.two_jumpy = two_jumpy
        self.bounded_ratio = bounded_ratio
        self.certified = certified
        self.horizon = horizon

    @property
    def nice(self) -> bool:
        return self.two_jumpy and self.bounded_ratio

    def to_json(self) -> dict:
        return {
            "monotone": self.monotone,
            "steady": self.steady,
            "two_jumpy": self.two_jumpy,
            "bounded_ratio": self.bounded_ratio,
            "nice": self.nice,
            "certified": self.certified,
            "horizon": self.horizon,
        }


def certify_finite(values: np.ndarray, first_index: int) -> ScaleFlags:
    """

    Finite-horizon classification of s_first..s_H, given as values[n] = s_n.

    monotone: non-decreasing on the whole range. steady: s_{n+1}/s_n within 5% of 1
    on the upper half. bounded-ratio: the largest ratio of the last quarter does not
    exceed the largest earlier ratio. two-jumpy: monotone, s_{2n}/s_n > 1.05 on
    [H/8, H/2], and the excess s_{2n}/s_n - 1 keeps at least 90% of its size
    between the two ends of that window.

    """

    horizon = len(values) - 1
    if horizon - first_index < 16:
        raise ValueError("Finite certification needs at least 16 values")

    s = np.asarray(values[first_index:], dtype=np.float64)
    if not np.all(np.isfinite(s)) or np.any(s <= 0):
        raise ValueError("Scale values must be finite and positive")

    monotone = bool(np.all(np.diff(s) >= 0))
    ratios = s[1:] / s[:-1]

    upper = ratios[len(ratios) // 2 :]
    steady = bool(np.all(np.abs(upper - 1.0) <= STEADY_TOLERANCE))

    split = (3 * len(ratios)) // 4
    bounded_ratio = bool(np.max(ratios[split:]) <= np.max(ratios[:split]) * (1 + 1e-12))

    start = max(first_index, horizon // 8)
    end = horizon // 2
    doubling = np.array(
        [values[2 * n] / values[n] for n in range(start, end + 1)], dtype=np.float64
    )
    excess_start = doubling[0] - 1.0
    excess_end = doubling[-1] - 1.0
    two_jumpy = bool(
        monotone
        and np.min(doubling) > TWO_JUMP_MARGIN
        and excess_start > 0
        and excess_end / excess_start >= TWO_JUMP_DECAY
    )

    return ScaleFlags(
        monotone, steady, two_jumpy, bounded_ratio, "finite-horizon", horizon
    )


def _ceil_root(value: int, degree: int) -> int:
    """Smallest integer n >= 0 with n ** degree >= value."""
    if value <= 0:
        return 0
    root = int(round(value ** (1.0 / degree))) if value.bit_length() < 1000 else 1
    # Newton from above for the floor root
    x = max(root, 1)
    while x**degree < value:
        x *= 2
    while True:
        y = ((degree - 1) * x + value // x ** (degree - 1)) // degree
        if y >= x:
            break
        x = y
    while x**degree > value:
        x -= 1
    return x if x**degree == value else x + 1


class ScaleSequence:
    """

    A positive sequence s_n tending to infinity. Subclasses provide the values and
    the classification flags; `first_index` is the first n where s_n is defined.

    The Liouville construction only needs N(L) = min{m : s_n / n >= L for all n >= m},
    which is the same for s and for its increasing minorant n * min_{m >= n} s_m / m.

    """

    first_index = 1

    def value(self, n: int) -> float:
        raise Exception("Not implemented!")

    def values(self, n_max: int) -> np.ndarray:
        """
        Array a with a[n] = s_n for first_index <= n <= n_max, nan elsewhere.
        """

        result = np.full(n_max + 1, np.nan)
        for n in range(self.first_index, n_max + 1):
            result[n] = self.value(n)
        return result

    def exact_value(self, n: int) -> Fraction | None:
        return None

    def mp_value(self, n: int) -> mpmath.mpf:
        return mpmath.mpf(self.value(n))

    def classify(self) -> ScaleFlags:
        raise Exception("Not implemented!")

    def ratio_diverges(self) -> bool:
        raise Exception("Not implemented!")

    def threshold_index(self, level: int) -> int:
        raise Exception("Not implemented!")

    def spec(self) -> str:
        raise Exception("Not implemented!")

    def __str__(self) -> str:
        return self.spec()


class PowerScale(ScaleSequence):
    """s_n = n^alpha"""

    def __init__(self, alpha):
        self.alpha = Fraction(alpha)
        if self.alpha <= 0:
            raise ValueError("Power scales need alpha > 0, got " + str(self.alpha))

    def value(self, n: int) -> float:
        return float(n) ** float(self.alpha)

    def values(self, n_max: int) -> np.ndarray:
        result = np.arange(n_max + 1, dtype=np.float64) ** float(self.alpha)
        result[0] = np.nan
        return result

    def exact_value(self, n: int) -> Fraction | None:
        if self.alpha.denominator == 1:
            return Fraction(n) ** self.alpha.numerator
        return None

    def mp_value(self, n: int) -> mpmath.mpf:
        exponent = mpmath.mpf(self.alpha.numerator) / self.alpha.denominator
        return mpmath.power(n, exponent)

    def classify(self) -> ScaleFlags:
        return ScaleFlags(True, True, True, True, "closed-form")

    def ratio_diverges(self) -> bool:
        return self.alpha > 1

    def threshold_index(self, level: int) -> int:
        if not self.ratio_diverges():
            raise ScaleTooSlow(self.spec() + ": s_n / n does not tend to infinity")
        # n^(u/v) >= level  <=>  n^u >= level^v
        exponent = self.alpha - 1
        return max(1, _ceil_root(level**exponent.denominator, exponent.numerator))

    def spec(self) -> str:
        return "pow:" + str(self.alpha)


class PowerLogScale(ScaleSequence):
    """s_n = n^alpha (ln n)^beta, defined from n = 2"""

    first_index = 2

    def __init__(self, alpha, beta):
        self.alpha = Fraction(alpha)
        self.beta = Fraction(beta)
        if self.alpha < 0 or (self.alpha == 0 and self.beta <= 0):
            raise ValueError(
                "PowerLog scales need alpha > 0, or alpha = 0 and beta > 0"
            )

    def value(self, n: int) -> float:
        return float(n) ** float(self.alpha) * math.log(n) ** float(self.beta)

    def values(self, n_max: int) -> np.ndarray:
        n = np.arange(n_max + 1, dtype=np.float64)
        result = np.full(n_max + 1, np.nan)
        tail = n[2:]
        result[2:] = tail ** float(self.alpha) * np.log(tail) ** float(self.beta)
        return result

    def mp_value(self, n: int) -> mpmath.mpf:
        alpha = mpmath.mpf(self.alpha.numerator) / self.alpha.denominator
        beta = mpmath.mpf(self.beta.numerator) / self.beta.denominator
        return mpmath.power(n, alpha) * mpmath.power(mpmath.log(n), beta)

    def classify(self) -> ScaleFlags:
        if self.alpha > 0:
            monotone = float(self.alpha) * math.log(2) + float(self.beta) > 0
        else:
            monotone = True
        two_jumpy = monotone and self.alpha > 0
        return ScaleFlags(monotone, True, two_jumpy, True, "closed-form")

    def ratio_diverges(self) -> bool:
        return self.alpha > 1 or (self.alpha == 1 and self.beta > 0)

    def __log_ratio(self, u, level_log):
        # log(s_n / n) - log(level) with u = ln n
        alpha = mpmath.mpf(self.alpha.numerator) / self.alpha.denominator
        beta = mpmath.mpf(self.beta.numerator) / self.beta.denominator
        return (alpha - 1) * u + beta * mpmath.log(u) - level_log

    def threshold_index(self, level: int) -> int:
        if not self.ratio_diverges():
            raise ScaleTooSlow(self.spec() + ": s_n / n does not tend to infinity")

        if self.alpha == 1:
            # (ln n)^beta >= level  <=>  n >= exp(level^(1/beta))
            beta = mpmath.mpf(self.beta.numerator) / self.beta.denominator
            with mpmath.workdps(30):
                exponent_guess = mpmath.power(level, 1 / beta)
            digits = int(exponent_guess / mpmath.log(10)) + 40
            with mpmath.workdps(digits):
                exponent = mpmath.power(level, 1 / beta)
                return max(2, int(mpmath.ceil(mpmath.exp(exponent))))

        alpha = mpmath.mpf(self.alpha.numerator) / self.alpha.denominator
        beta = mpmath.mpf(self.beta.numerator) / self.beta.denominator
        with mpmath.workdps(60):
            level_log = mpmath.log(level)
            low = mpmath.log(2)
            if beta < 0:
                low = max(low, -beta / (alpha - 1))
            if self.__log_ratio(low, level_log) >= 0:
                return 2
            high = low * 2 + 1
            while self.__log_ratio(high, level_log) < 0:
                high *= 2
            for _ in range(400):
                middle = (low + high) / 2
                if self.__log_ratio(middle, level_log) < 0:
                    low = middle
                else:
                    high = middle
            candidate = max(2, int(mpmath.ceil(mpmath.exp(high))))
            while (
                candidate > 2
                and self.__log_ratio(mpmath.log(candidate - 1), level_log) >= 0
            ):
                candidate -= 1
            while self.__log_ratio(mpmath.log(candidate), level_log) < 0:
                candidate += 1
            return candidate

    def spec(self) -> str:
        return "powlog:" + str(self.alpha) + "," + str(self.beta)


class _FiniteScale(ScaleSequence):
    def horizon(self) -> int:
        raise Exception("Not implemented!")

    def classify(self) -> ScaleFlags:
        return certify_finite(self.values(self.horizon()), self.first_index)

    def __ratios(self) -> np.ndarray:
        values = self.values(self.horizon())
        n = np.arange(len(values), dtype=np.float64)
        return values[self.first_index :] / n[self.first_index :]

    def ratio_diverges(self) -> bool:
        ratios = self.__ratios()
        quarter = len(ratios) // 4
        return bool(np.min(ratios[-quarter:]) > np.max(ratios[:quarter]))

    def threshold_index(self, level: int) -> int:
        if not self.ratio_diverges():
            raise ScaleTooSlow(self.spec() + ": growth of s_n / n not certified")
        ratios = self.__ratios()
        below = np.nonzero(ratios < level)[0]
        if len(below) and below[-1] == len(ratios) - 1:
            raise ScaleTooSlow(
                self.spec()
                + ": s_n / n stays below "
                + str(level)
                + " up to the horizon"
            )
        if len(below) == 0:
            return self.first_index
        return int(below[-1]) + 1 + self.first_index


class TableScale(_FiniteScale):
    """s_1..s_H from a table"""

    def __init__(self, values: Sequence):
        if len(values) == 0:
            raise ValueError("Empty scale table")
        self.__exact = [
            Fraction(v) if not isinstance(v, float) else None for v in values
        ]
        self.__values = np.array([float(v) for v in values], dtype=np.float64)
        if np.any(self.__values <= 0):
            raise ValueError("Scale values must be positive")

    def horizon(self) -> int:
        return len(self.__values)

    def value(self, n: int) -> float:
        return float(self.__values[n - 1])

    def values(self, n_max: int) -> np.ndarray:
        if n_max > self.horizon():
            raise ScaleTooSlow("Scale table ends at n = " + str(self.horizon()))
        result = np.full(n_max + 1, np.nan)
        result[1:] = self.__values[:n_max]
        return result

    def exact_value(self, n: int) -> Fraction | None:
        return self.__exact[n - 1]

    def spec(self) -> str:
        return "table:" + ",".join(repr(float(v)) for v in self.__values)


class ExprScale(_FiniteScale):
    """s_n from a formula in n, e.g. 'n*log(n)'"""

    def __init__(self, formula: str, horizon: int = DEFAULT_EXPR_HORIZON):
        symbol = sympy.Symbol("n", positive=True, integer=True)
        try:
            expression = sympy.sympify(formula, locals={"n": symbol}, rational=True)
        except (sympy.SympifyError, SyntaxError, TypeError) as e:
            raise BadLiteral("Cannot parse scale formula '" + formula + "'") from e
        if expression.free_symbols - {symbol}:
            raise BadLiteral("Scale formula may only use n: '" + formula + "'")

        self.formula = formula
        self.__horizon = horizon
        self.__symbol = symbol
        self.__expression = expression
        self.__numeric = sympy.lambdify(symbol, expression, "numpy")
        self.__precise = sympy.lambdify(symbol, expression, "mpmath")

        with np.errstate(all="ignore"):
            first = float(self.__numeric(np.float64(1)))
        self.first_index = 1 if np.isfinite(first) and first > 0 else 2

    def horizon(self) -> int:
        return self.__horizon

    def value(self, n: int) -> float:
        return float(self.__numeric(np.float64(n)))

    def values(self, n_max: int) -> np.ndarray:
        n = np.arange(n_max + 1, dtype=np.float64)
        with np.errstate(all="ignore"):
            result = np.asarray(self.__numeric(n), dtype=np.float64) * np.ones_like(n)
        result[: self.first_index] = np.nan
        return result

    def exact_value(self, n: int) -> Fraction | None:
        value = self.__expression.subs(self.__symbol, n)
        if value.is_Rational:
            return Fraction(int(value.p), int(value.q))
        return None

    def mp_value(self, n: int) -> mpmath.mpf:
        return mpmath.mpf(self.__precise(mpmath.mpf(n)))

    def spec(self) -> str:
        return "expr:" + self.formula


def classify_scale(s: ScaleSequence) -> ScaleFlags:
    """
    Closed-form flags for power and power-log scales, finite-horizon flags otherwise.
    """

    flags = s.classify()
    logger.debug("Scale %s: %s", s.spec(), flags.to_json())
    return flags


def parse_scale(text: str) -> ScaleSequence:
    """

    'pow:ALPHA', 'powlog:ALPHA,BETA', 'table:V1,V2,...' or 'expr:FORMULA[@HORIZON]'.
    Exponents are read as exact decimals.

    """

    kind, _, rest = text.partition(":")
    kind = kind.strip().lower()
    rest = rest.strip()
    try:
        if kind == "pow":
            return PowerScale(Fraction(rest))
        if kind == "powlog":
            alpha, beta = rest.split(",")
            return PowerLogScale(Fraction(alpha.strip()), Fraction(beta.strip()))
        if kind == "table":
            return TableScale(
                [Fraction(v.strip()) for v in rest.split(",") if v.strip()]
            )
        if kind == "expr":
            formula, _, horizon = rest.partition("@")
            if horizon:
                return ExprScale(formula.strip(), int(horizon))
            return ExprScale(formula.strip())
    except (ValueError, ZeroDivisionError) as e:
        raise BadLiteral("Cannot parse scale '" + text + "': " + str(e)) from e
    raise BadLiteral("Unknown scale kind '" + kind + "' in '" + text + "'")

from __future__ import annotations

import logging
import re
from fractions import Fraction

import sympy

from interval_exchange.utils.error import BadLiteral
from interval_exchange.utils.exact_real import ExactReal

logger = logging.getLogger(__name__)

GOLDEN_NAMES = ("golden", "phi")

_ALLOWED = re.compile(r"^[0-9a-z_+\-*/().\s^]*$")


def _as_fraction(value: sympy.Expr, literal: str) -> Fraction:
    if not value.is_Rational:
        raise BadLiteral("Not an exact quadratic number: '" + literal + "'")
    return Fraction(int(value.p), int(value.q))


def parse_exact(literal: str) -> ExactReal:
    """

    Parses a textual number literal into an ExactReal.

    Accepted are rationals ("2/3"), decimals ("0.6666", read as exact rationals),
    quadratic expressions such as "sqrt(5)/2-1/2" or "1/3+2/7*sqrt(2)" and the names
    'golden' / 'phi' for (sqrt(5)-1)/2. Anything outside the quadratic fields raises
    BadLiteral.

    """

    if not isinstance(literal, str):
        raise BadLiteral("Literal must be a string, got " + type(literal).__name__)

    text = literal.strip().lower()
    if text in GOLDEN_NAMES:
        return ExactReal.quadratic(Fraction(-1, 2), Fraction(1, 2), 5)

    if len(text) == 0 or not _ALLOWED.match(text):
        raise BadLiteral("Cannot parse number literal '" + literal + "'")

    try:
        expression = sympy.sympify(text.replace("^", "**"), rational=True)
    except (sympy.SympifyError, SyntaxError, TypeError) as e:
        raise BadLiteral("Cannot parse number literal '" + literal + "'") from e

    if expression.free_symbols:
        raise BadLiteral("Literal contains free symbols: '" + literal + "'")

    expression = sympy.expand(sympy.radsimp(expression))

    rational_part = Fraction(0)
    surd_part = Fraction(0)
    radicand = None

    for term in sympy.Add.make_args(expression):
        coefficient, rest = term.as_coeff_Mul()
        if rest == 1:
            rational_part += _as_fraction(coefficient, literal)
            continue

        is_root = rest.is_Pow and rest.exp == sympy.Rational(1, 2)
        if not (is_root and rest.base.is_Integer):
            raise BadLiteral("Not an exact quadratic number: '" + literal + "'")

        base = int(rest.base)
        if radicand is not None and radicand != base:
            raise BadLiteral(
                "Literal mixes sqrt(" + str(radicand) + ") and sqrt(" + str(base) + ")"
            )
        radicand = base
        surd_part += _as_fraction(coefficient, literal)

    if radicand is None:
        value = ExactReal.of(rational_part)
    else:
        value = ExactReal.quadratic(rational_part, surd_part, radicand)

    logger.debug("Parsed literal '%s' as %s", literal, value)
    return value


def format_exact(value: ExactReal) -> str:
    """
    Inverse of parse_exact: 'p/q' for rationals, 'a+b*sqrt(d)' otherwise.
    """

    return str(value)

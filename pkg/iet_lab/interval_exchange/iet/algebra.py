from __future__ import annotations

import logging

from interval_exchange.iet.iet import Iet, from_pieces, identity
from interval_exchange.utils.exact_real import ONE

logger = logging.getLogger(__name__)


class PowerMode:
    SQUARING = "squaring"
    ITERATIVE = "iterative"


def invert(iet: Iet) -> Iet:
    """
    The IET S with S(T(x)) = x. Interval j of S is the image interval at position j.
    """

    inverse_perm = [0] * iet.r
    for k, position in enumerate(iet.perm):
        inverse_perm[position - 1] = k + 1
    lengths = [iet.lengths[k - 1] for k in inverse_perm]
    return Iet(lengths, inverse_perm)


def compose(t: Iet, s: Iet) -> Iet:
    """

    The IET U = T o S, in canonical form.

    U is continuous away from the breakpoints of S and the S-preimages of the
    discontinuities of T, so those points cut [0, 1) into the pieces of U.

    """

    s_inverse = invert(s)
    cuts = set(s.breakpoints[:-1])
    for c in t.breakpoints[1:-1]:
        cuts.add(s_inverse.evaluate(c))
    cuts = sorted(cuts)

    lengths = []
    translations = []
    for i, left in enumerate(cuts):
        right = cuts[i + 1] if i + 1 < len(cuts) else ONE
        lengths.append(right - left)
        translations.append(t.evaluate(s.evaluate(left)) - left)

    return from_pieces(lengths, translations)


def power(iet: Iet, n: int, mode: str = PowerMode.SQUARING) -> Iet:
    """

    T^n for n >= 0. Squaring needs O(log n) compositions, the iterative mode composes
    n times but keeps every intermediate power at its minimal interval count.

    """

    if n < 0:
        raise ValueError("power needs n >= 0, got " + str(n))

    if mode == PowerMode.ITERATIVE:
        result = identity()
        for _ in range(n):
            result = compose(iet, result)
        return result

    if mode != PowerMode.SQUARING:
        raise ValueError("Unknown power mode '" + str(mode) + "'")

    result = identity()
    base = iet.canonical()
    while n > 0:
        if n & 1:
            result = compose(base, result)
        n >>= 1
        if n:
            base = compose(base, base)
    return result

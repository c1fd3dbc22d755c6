from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np

from interval_exchange.iet.iet import Iet
from interval_exchange.utils.exact_real import ONE, ZERO, ExactReal
from interval_exchange.utils.literal_parser import parse_exact

GOLDEN = parse_exact("golden")
SQRT2_MINUS_1 = parse_exact("sqrt(2)-1")


def brute_orbit(iet: Iet, x, n: int) -> list:
    points = [ExactReal.of(x)]
    for _ in range(n):
        points.append(iet.evaluate(points[-1]))
    return points


def brute_return(iet: Iet, a, b, x, max_steps: int = 10**5) -> tuple[int, ExactReal]:
    """(return time, return point) of x in [a, b) by plain iteration."""
    y = x
    for n in range(1, max_steps + 1):
        y = iet.evaluate(y)
        if a <= y < b:
            return n, y
    raise AssertionError("no return within " + str(max_steps) + " steps")


def brute_window_count(alpha: ExactReal, a, b, q: int, x) -> int:
    count = 0
    point = ExactReal.of(x)
    for _ in range(q):
        if a <= point < b:
            count += 1
        point = (point + alpha).frac()
    return count


def random_quadratic(rng: np.random.Generator) -> ExactReal:
    """An irrational (a + b sqrt(d)) mod 1 with small random coefficients."""
    d = int(rng.choice([2, 3, 5, 6, 7, 10, 11, 13]))
    a = Fraction(int(rng.integers(-9, 10)), int(rng.integers(1, 10)))
    b = Fraction(int(rng.integers(1, 10)), int(rng.integers(1, 10)))
    if rng.integers(0, 2):
        b = -b
    return ExactReal.quadratic(a, b, d).frac()


def random_rational_iet(rng: np.random.Generator, r: int, denominator: int = 97) -> Iet:
    cuts = sorted(
        int(c) for c in rng.choice(np.arange(1, denominator), size=r - 1, replace=False)
    )
    bounds = [0] + cuts + [denominator]
    lengths = [
        Fraction(right - left, denominator) for left, right in zip(bounds, bounds[1:])
    ]
    perm = [int(p) + 1 for p in rng.permutation(r)]
    return Iet(lengths, perm)


def random_quadratic_iet(rng: np.random.Generator, r: int) -> Iet:
    """Lengths from rational cuts shifted by multiples of sqrt(2)/100."""
    root = SQRT2_MINUS_1 * Fraction(1, 50)
    while True:
        cuts = sorted(
            ExactReal.of(Fraction(int(c), 100)) + root * int(k)
            for c, k in zip(
                rng.choice(np.arange(5, 95), size=r - 1, replace=False),
                rng.integers(0, 3, size=r - 1),
            )
        )
        bounds = [ZERO] + cuts + [ONE]
        lengths = [right - left for left, right in zip(bounds, bounds[1:])]
        if all(length.sign() > 0 for length in lengths):
            break
    perm = [int(p) + 1 for p in rng.permutation(r)]
    return Iet(lengths, perm)


def irreducible_perms(r: int) -> list[tuple[int, ...]]:
    """Permutations with no proper initial block {1..k} mapped onto itself."""
    result = []
    for perm in itertools.permutations(range(1, r + 1)):
        if all(set(perm[:k]) != set(range(1, k + 1)) for k in range(1, r)):
            result.append(perm)
    return result

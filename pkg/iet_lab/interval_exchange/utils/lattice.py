from __future__ import annotations

import math
from typing import Iterable

import numpy as np

from interval_exchange.utils.error import IncompatibleField
from interval_exchange.utils.exact_real import ExactReal, floor_of_surd, sign_of_surd

FLOAT_SLACK = 2.0**-48


class LatticeFrame:
    """

    A common coordinate frame (P + Q * sqrt(d)) / R for a finite set of ExactReals.

    Inside one frame sums and differences are integer additions on (P, Q) and
    comparisons reduce to the sign of an integer surd. Floating point is only used
    to locate a point; every float carries the error radius returned by
    `error_radius`.

    """

    def __init__(self, d: int, denominator: int):
        if denominator <= 0:
            raise ValueError("Frame denominator must be positive")
        self.__d = d
        self.__denominator = denominator
        self.__sqrt_d = math.sqrt(d)

    @staticmethod
    def common(values: Iterable[ExactReal]) -> LatticeFrame:
        d = 1
        denominator = 1
        for value in values:
            value = ExactReal.of(value)
            if not value.is_rational:
                if d != 1 and value.d != d:
                    raise IncompatibleField(
                        "Cannot mix sqrt(" + str(d) + ") and sqrt(" + str(value.d) + ")"
                    )
                d = value.d
            denominator = math.lcm(denominator, value.r)
        return LatticeFrame(d, denominator)

    def refine(self, denominator: int) -> LatticeFrame:
        return LatticeFrame(self.__d, math.lcm(self.__denominator, denominator))

    @property
    def d(self) -> int:
        return self.__d

    @property
    def denominator(self) -> int:
        return self.__denominator

    def coords(self, value) -> tuple[int, int]:
        value = ExactReal.of(value)
        if not value.is_rational and value.d != self.__d:
            raise IncompatibleField("Value " + str(value) + " is outside the frame")
        factor, rest = divmod(self.__denominator, value.r)
        if rest:
            raise ValueError(
                "Denominator of " + str(value) + " does not divide the frame"
            )
        return value.p * factor, value.q * factor

    def value(self, p: int, q: int) -> ExactReal:
        return ExactReal(p, q, self.__denominator, self.__d)

    def to_float(self, p: int, q: int) -> float:
        if q == 0:
            return p / self.__denominator
        return (p + q * self.__sqrt_d) / self.__denominator

    def to_float_array(self, p: np.ndarray, q: np.ndarray) -> np.ndarray:
        return (p.astype(np.float64) + q.astype(np.float64) * self.__sqrt_d) / float(
            self.__denominator
        )

    def error_radius(self, p, q):
        """
        Bound on |to_float(p, q) - exact value|; works elementwise on arrays.
        """

        return (np.abs(p) + np.abs(q) * self.__sqrt_d + 1.0) / float(
            self.__denominator
        ) * FLOAT_SLACK

    def sign(self, p: int, q: int) -> int:
        return sign_of_surd(p, q, self.__d)

    def compare(self, a: tuple[int, int], b: tuple[int, int]) -> int:
        return sign_of_surd(a[0] - b[0], a[1] - b[1], self.__d)

    def floor(self, p: int, q: int) -> int:
        return floor_of_surd(p, q, self.__denominator, self.__d)

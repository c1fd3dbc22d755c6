from __future__ import annotations

import bisect
import logging
from typing import Iterator

import numpy as np

from interval_exchange.iet.iet import Iet
from interval_exchange.utils.error import BudgetExhausted
from interval_exchange.utils.exact_real import CirclePoint, ExactReal
from interval_exchange.utils.lattice import LatticeFrame

logger = logging.getLogger(__name__)

INT64_GUARD = 2**60


class ExactOrbit:
    """

    Exact forward orbit of one point under an IET.

    Coordinates live in a LatticeFrame shared by the IET and the start point, so one
    step is a float bisection, two exact integer comparisons and two integer
    additions.

    """

    def __init__(self, iet: Iet, x, frame: LatticeFrame | None = None):
        x = CirclePoint.of(x)
        self.__iet = iet
        if frame is None:
            frame = LatticeFrame.common(iet.lengths + iet.translations + (x,))
        self.__frame = frame

        self.__breakpoints = [frame.coords(s) for s in iet.breakpoints]
        self.__breakpoint_floats = [frame.to_float(*c) for c in self.__breakpoints]
        self.__translations = [frame.coords(h) for h in iet.translations]
        self.__p, self.__q = frame.coords(x)

    @property
    def frame(self) -> LatticeFrame:
        return self.__frame

    @property
    def coords(self) -> tuple[int, int]:
        return self.__p, self.__q

    @property
    def point(self) -> CirclePoint:
        return CirclePoint.of(self.__frame.value(self.__p, self.__q))

    def locate(self, p: int, q: int) -> int:
        frame = self.__frame
        r = len(self.__translations)
        x = frame.to_float(p, q)
        k = bisect.bisect_right(self.__breakpoint_floats, x, 0, r) - 1
        k = min(max(k, 0), r - 1)
        while k > 0 and frame.compare((p, q), self.__breakpoints[k]) < 0:
            k -= 1
        while k < r - 1 and frame.compare((p, q), self.__breakpoints[k + 1]) >= 0:
            k += 1
        return k

    def step(self) -> tuple[int, int]:
        k = self.locate(self.__p, self.__q)
        hp, hq = self.__translations[k]
        self.__p += hp
        self.__q += hq
        return self.__p, self.__q

    def coordinates(self, n: int) -> Iterator[tuple[int, int]]:
        """
        Yields the coordinates of T(x), ..., T^n(x).
        """

        for _ in range(n):
            yield self.step()

    def points(self, n: int) -> Iterator[CirclePoint]:
        for p, q in self.coordinates(n):
            yield CirclePoint.of(self.__frame.value(p, q))


def orbit(iet: Iet, x, n: int) -> list[CirclePoint]:
    """
    The exact orbit x, T(x), ..., T^n(x).
    """

    walker = ExactOrbit(iet, x)
    return [CirclePoint.of(x)] + list(walker.points(n))


class BatchOrbit:
    """

    Vectorised orbits of many points given by integer lattice coordinates.

    Points are located with numpy on float images of the coordinates. Elements whose
    float lies within the error radius of a breakpoint are resolved exactly in
    Python integers. Raises BudgetExhausted if coordinates would leave int64.

    """

    def __init__(self, iet: Iet, frame: LatticeFrame, p: np.ndarray, q: np.ndarray):
        self.__iet = iet
        self.__frame = frame
        self.__breakpoints = [frame.coords(s) for s in iet.breakpoints]
        self.__breakpoint_floats = np.array(
            [frame.to_float(*c) for c in self.__breakpoints], dtype=np.float64
        )
        translations = [frame.coords(h) for h in iet.translations]
        for hp, hq in translations + self.__breakpoints:
            if abs(hp) >= INT64_GUARD or abs(hq) >= INT64_GUARD:
                raise BudgetExhausted("IET coordinates exceed the int64 lattice")
        self.__hp = np.array([t[0] for t in translations], dtype=np.int64)
        self.__hq = np.array([t[1] for t in translations], dtype=np.int64)
        self.__max_step = int(np.max(np.abs(self.__hp))) + int(
            np.max(np.abs(self.__hq))
        )

        self.p = np.asarray(p, dtype=np.int64).copy()
        self.q = np.asarray(q, dtype=np.int64).copy()

    @staticmethod
    def from_points(iet: Iet, points: list) -> BatchOrbit:
        frame = LatticeFrame.common(iet.lengths + iet.translations + tuple(points))
        coords = [frame.coords(x) for x in points]
        if any(abs(p) >= INT64_GUARD or abs(q) >= INT64_GUARD for p, q in coords):
            raise BudgetExhausted("Point coordinates exceed the int64 lattice")
        return BatchOrbit(
            iet,
            frame,
            np.array([c[0] for c in coords], dtype=np.int64),
            np.array([c[1] for c in coords], dtype=np.int64),
        )

    @staticmethod
    def from_dyadic(iet: Iet, numerators: np.ndarray, bits: int) -> BatchOrbit:
        """
        Points numerators / 2^bits.
        """

        frame = LatticeFrame.common(iet.lengths + iet.translations).refine(2**bits)
        scale = frame.denominator // 2**bits
        if scale * 2**bits >= INT64_GUARD:
            raise BudgetExhausted("Dyadic frame exceeds the int64 lattice")
        p = np.asarray(numerators, dtype=np.int64) * np.int64(scale)
        return BatchOrbit(iet, frame, p, np.zeros_like(p))

    @property
    def frame(self) -> LatticeFrame:
        return self.__frame

    def floats(self) -> np.ndarray:
        return self.__frame.to_float_array(self.p, self.q)

    def error_radius(self) -> np.ndarray:
        return self.__frame.error_radius(
            self.p.astype(np.float64), self.q.astype(np.float64)
        )

    def locate(self) -> np.ndarray:
        r = len(self.__hp)
        x = self.floats()
        radius = self.error_radius()
        k = np.searchsorted(self.__breakpoint_floats, x, side="right") - 1
        k = np.clip(k, 0, r - 1)

        left_gap = np.abs(x - self.__breakpoint_floats[k])
        right_gap = np.abs(self.__breakpoint_floats[k + 1] - x)
        ambiguous = np.nonzero((left_gap <= radius) | (right_gap <= radius))[0]
        for i in ambiguous:
            k[i] = self.__exact_index(int(self.p[i]), int(self.q[i]), int(k[i]))
        return k

    def __exact_index(self, p: int, q: int, k: int) -> int:
        frame = self.__frame
        r = len(self.__hp)
        while k > 0 and frame.compare((p, q), self.__breakpoints[k]) < 0:
            k -= 1
        while k < r - 1 and frame.compare((p, q), self.__breakpoints[k + 1]) >= 0:
            k += 1
        return k

    def step(self) -> np.ndarray:
        """
        Advances every point once and returns the interval indices used.
        """

        if len(self.p) and (
            int(np.max(np.abs(self.p))) + self.__max_step >= INT64_GUARD
            or int(np.max(np.abs(self.q))) + self.__max_step >= INT64_GUARD
        ):
            raise BudgetExhausted("Orbit coordinates exceed the int64 lattice")
        k = self.locate()
        self.p += self.__hp[k]
        self.q += self.__hq[k]
        return k

    def exact_point(self, i: int) -> ExactReal:
        return self.__frame.value(int(self.p[i]), int(self.q[i]))

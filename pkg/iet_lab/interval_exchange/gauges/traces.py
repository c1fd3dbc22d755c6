from __future__ import annotations

import logging
from fractions import Fraction
from typing import Sequence

import mpmath
import numpy as np

from interval_exchange.gauges.scale_sequence import ScaleSequence
from interval_exchange.iet.iet import Iet
from interval_exchange.iet.orbit import BatchOrbit, ExactOrbit
from interval_exchange.utils.exact_real import ONE, CirclePoint, ExactReal
from interval_exchange.utils.lattice import LatticeFrame
from interval_exchange.utils.sampling import DYADIC_BITS

logger = logging.getLogger(__name__)

PREFILTER = 1 + 1e-12
EXACT_DPS = 60


class GaugeKind:
    PHI = "phi"
    PSI = "psi"
    RHO = "rho"

    ALL = (PHI, PSI, RHO)


class Metric:
    INTERVAL = "interval"
    CIRCLE = "circle"


def dyadic_horizons(n_max: int, first: int = 2) -> list[int]:
    """
    first, 2 first, 4 first, ... below n_max, then n_max itself.
    """

    horizons = []
    n = first
    while n < n_max:
        horizons.append(n)
        n *= 2
    horizons.append(n_max)
    return horizons


class GaugeTrace:
    """

    Running minima of s_n d(., .) of one sample at the horizons N_1 < ... < N_m.

    running_min[i] / argmin[i] refer to 1 <= n <= N_i, window_min[i] /
    window_argmin[i] to the block N_{i-1} < n <= N_i. `exact_min` holds the exact
    running minima as strings when they were confirmed exactly.

    """

    def __init__(
        self, kind: str, sample_id: int, x, y, horizons: Sequence[int], metric: str
    ):
        self.kind = kind
        self.sample_id = sample_id
        self.x = x
        self.y = y
        self.horizons = tuple(horizons)
        self.metric = metric
        self.running_min: list[float] = []
        self.argmin: list[int] = []
        self.window_min: list[float] = []
        self.window_argmin: list[int] = []
        self.exact_min: list[str | None] = []

    def final_window_min(self) -> float:
        return self.window_min[-1]

    def rows(self, exact: bool = False) -> list[list]:
        """
        CSV rows: sample_id, x, y, horizon, running_min, argmin.
        """

        result = []
        for i, horizon in enumerate(self.horizons):
            value = self.running_min[i]
            if exact and self.exact_min[i] is not None:
                value = self.exact_min[i]
            result.append(
                [
                    self.sample_id,
                    _format_point(self.x, exact),
                    "" if self.y is None else _format_point(self.y, exact),
                    horizon,
                    value if isinstance(value, str) else repr(float(value)),
                    self.argmin[i],
                ]
            )
        return result

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "sample_id": self.sample_id,
            "x": str(self.x),
            "y": None if self.y is None else str(self.y),
            "metric": self.metric,
            "horizons": list(self.horizons),
            "running_min": self.running_min,
            "argmin": self.argmin,
            "window_min": self.window_min,
            "window_argmin": self.window_argmin,
            "exact_min": self.exact_min,
        }


def _format_point(value, exact: bool) -> str:
    if exact or isinstance(value, (ExactReal, Fraction)):
        return str(value) if exact else repr(float(value))
    return repr(float(value))


def _check_horizons(horizons: Sequence[int]):
    if len(horizons) == 0 or horizons[0] < 1:
        raise ValueError("Horizons must be positive")
    if any(b <= a for a, b in zip(horizons, horizons[1:])):
        raise ValueError("Horizons must be strictly increasing")


def _less(a, b) -> bool:
    """Exact comparison of ExactReal / mpf keys."""
    if isinstance(a, ExactReal) and isinstance(b, ExactReal):
        return a < b
    with mpmath.workdps(EXACT_DPS):
        a = a.to_mpf(EXACT_DPS) if isinstance(a, ExactReal) else a
        b = b.to_mpf(EXACT_DPS) if isinstance(b, ExactReal) else b
        return a < b


class _ScalarScan:
    """Orbit scan of one sample with exact confirmation of new minima."""

    def __init__(
        self, kind: str, iet: Iet, s: ScaleSequence, x, y, metric: str, exact: bool
    ):
        points = (x,) if y is None else (x, y)
        frame = LatticeFrame.common(iet.lengths + iet.translations + points)
        self.frame = frame
        self.kind = kind
        self.s = s
        self.metric = metric
        self.exact = exact

        self.walk_x = ExactOrbit(iet, x, frame)
        self.walk_y = ExactOrbit(iet, y, frame) if kind == GaugeKind.PSI else None
        self.fixed = frame.coords(y if kind == GaugeKind.PHI else x)

    def distance(self, a: tuple[int, int], b: tuple[int, int]) -> tuple[float, float]:
        frame = self.frame
        value = abs(frame.to_float(*a) - frame.to_float(*b))
        error = float(
            frame.error_radius(
                float(abs(a[0]) + abs(b[0])), float(abs(a[1]) + abs(b[1]))
            )
        )
        if self.metric == Metric.CIRCLE:
            value = min(value, 1.0 - value)
        return value, error

    def exact_value(self, n: int, a: tuple[int, int], b: tuple[int, int]):
        d = abs(self.frame.value(a[0] - b[0], a[1] - b[1]))
        if self.metric == Metric.CIRCLE:
            other = ONE - d
            d = d if d <= other else other
        s_exact = self.s.exact_value(n)
        if s_exact is not None:
            return d * ExactReal.of(s_exact)
        with mpmath.workdps(EXACT_DPS):
            return self.s.mp_value(n) * d.to_mpf(EXACT_DPS)

    def step(self) -> tuple[tuple[int, int], tuple[int, int]]:
        a = self.walk_x.step()
        if self.kind == GaugeKind.PSI:
            return a, self.walk_y.step()
        return a, self.fixed


def gauge_trace(
    kind: str,
    iet: Iet,
    s: ScaleSequence,
    x,
    y=None,
    horizons: Sequence[int] = (1024,),
    metric: str = Metric.INTERVAL,
    exact: bool = True,
    sample_id: int = 0,
) -> GaugeTrace:
    """

    One orbit pass computing min s_n d(T^n x, y) (phi), min s_n d(T^n x, T^n y) (psi)
    or min s_n d(T^n x, x) (rho) up to every horizon.

    In exact mode floats only preselect candidates: a value within the float error of
    the current window minimum is recomputed exactly (ExactReal when s_n is exact,
    60-digit mpmath otherwise) before it can become the new minimum.

    """

    if kind not in GaugeKind.ALL:
        raise ValueError("Unknown gauge kind '" + str(kind) + "'")
    if (kind == GaugeKind.RHO) != (y is None):
        raise ValueError("rho traces take no y, phi and psi traces need one")
    _check_horizons(horizons)

    x = CirclePoint.of(x)
    y = None if y is None else CirclePoint.of(y)
    scan = _ScalarScan(kind, iet, s, x, y, metric, exact)
    values = s.values(horizons[-1])
    trace = GaugeTrace(kind, sample_id, x, y, horizons, metric)

    running = (np.inf, None, 0)
    window = (np.inf, None, 0)
    next_horizon = 0

    for n in range(1, horizons[-1] + 1):
        a, b = scan.step()
        if n < s.first_index:
            continue
        distance, error = scan.distance(a, b)
        s_n = values[n]
        value = s_n * distance
        slack = s_n * error

        if value - slack <= window[0] * PREFILTER + slack:
            if exact:
                key = scan.exact_value(n, a, b)
                if window[1] is None or _less(key, window[1]):
                    window = (float(key), key, n)
            elif value < window[0]:
                window = (value, None, n)

        if n == horizons[next_horizon]:
            if window[2] and (
                running[2] == 0
                or (exact and _less(window[1], running[1]))
                or (not exact and window[0] < running[0])
            ):
                running = window
            trace.window_min.append(window[0])
            trace.window_argmin.append(window[2])
            trace.running_min.append(running[0])
            trace.argmin.append(running[2])
            trace.exact_min.append(None if running[1] is None else str(running[1]))
            window = (np.inf, None, 0)
            next_horizon += 1

    logger.debug(
        "%s trace of sample %s: running minima %s", kind, sample_id, trace.running_min
    )
    return trace


def batch_traces(
    kind: str,
    iet: Iet,
    s: ScaleSequence,
    pairs: Sequence[tuple[int, int]],
    horizons: Sequence[int],
    metric: str = Metric.INTERVAL,
    bits: int = DYADIC_BITS,
    first_sample_id: int = 0,
) -> list[GaugeTrace]:
    """

    Vectorised traces for many samples given as dyadic numerators (x, y) of
    x = X / 2^bits. Values are floats; the running minimum at the last horizon is
    re-evaluated exactly from the coordinates stored at its argmin when s is exact.

    """

    if kind not in GaugeKind.ALL:
        raise ValueError("Unknown gauge kind '" + str(kind) + "'")
    _check_horizons(horizons)

    xs = np.array([p[0] for p in pairs], dtype=np.int64)
    ys = np.array([p[1] for p in pairs], dtype=np.int64)
    orbit_x = BatchOrbit.from_dyadic(iet, xs, bits)
    frame = orbit_x.frame
    orbit_y = BatchOrbit.from_dyadic(iet, ys, bits) if kind == GaugeKind.PSI else None

    fixed = ys if kind == GaugeKind.PHI else xs
    fixed_p = fixed * np.int64(frame.denominator // 2**bits)
    fixed_q = np.zeros_like(fixed_p)
    fixed_float = frame.to_float_array(fixed_p, fixed_q)

    values = s.values(horizons[-1])
    count = len(pairs)
    running = np.full(count, np.inf)
    running_arg = np.zeros(count, dtype=np.int64)
    window = np.full(count, np.inf)
    window_arg = np.zeros(count, dtype=np.int64)
    store_p = np.zeros((count, 2), dtype=np.int64)
    store_q = np.zeros((count, 2), dtype=np.int64)
    window_p = np.zeros((count, 2), dtype=np.int64)
    window_q = np.zeros((count, 2), dtype=np.int64)

    traces = []
    for i, (x, y) in enumerate(pairs):
        trace = GaugeTrace(
            kind,
            first_sample_id + i,
            Fraction(x, 2**bits),
            None if kind == GaugeKind.RHO else Fraction(y, 2**bits),
            horizons,
            metric,
        )
        traces.append(trace)

    next_horizon = 0
    for n in range(1, horizons[-1] + 1):
        orbit_x.step()
        if orbit_y is not None:
            orbit_y.step()
            other_p, other_q, other_float = orbit_y.p, orbit_y.q, orbit_y.floats()
        else:
            other_p, other_q, other_float = fixed_p, fixed_q, fixed_float

        if n >= s.first_index:
            distance = np.abs(orbit_x.floats() - other_float)
            if metric == Metric.CIRCLE:
                distance = np.minimum(distance, 1.0 - distance)
            value = values[n] * distance
            better = value < window
            if np.any(better):
                window = np.where(better, value, window)
                window_arg = np.where(better, n, window_arg)
                window_p[better, 0] = orbit_x.p[better]
                window_q[better, 0] = orbit_x.q[better]
                window_p[better, 1] = other_p[better]
                window_q[better, 1] = other_q[better]

        if n == horizons[next_horizon]:
            improved = (window < running) | (running_arg == 0)
            improved &= window_arg > 0
            running = np.where(improved, window, running)
            running_arg = np.where(improved, window_arg, running_arg)
            store_p[improved] = window_p[improved]
            store_q[improved] = window_q[improved]
            for i, trace in enumerate(traces):
                trace.window_min.append(float(window[i]))
                trace.window_argmin.append(int(window_arg[i]))
                trace.running_min.append(float(running[i]))
                trace.argmin.append(int(running_arg[i]))
                trace.exact_min.append(None)
            window = np.full(count, np.inf)
            window_arg = np.zeros(count, dtype=np.int64)
            next_horizon += 1

    for i, trace in enumerate(traces):
        n = trace.argmin[-1]
        s_exact = s.exact_value(n) if n else None
        if s_exact is None:
            continue
        d = abs(
            frame.value(
                int(store_p[i, 0] - store_p[i, 1]), int(store_q[i, 0] - store_q[i, 1])
            )
        )
        if metric == Metric.CIRCLE:
            d = min(d, ONE - d)
        trace.exact_min[-1] = str(d * ExactReal.of(s_exact))

    return traces

from __future__ import annotations

import logging
from typing import Sequence

import numpy as np

from interval_exchange.gauges.scale_sequence import ScaleSequence, classify_scale
from interval_exchange.gauges.traces import GaugeKind, Metric, batch_traces
from interval_exchange.iet.iet import Iet
from interval_exchange.iet.orbit import BatchOrbit
from interval_exchange.utils.sampling import DYADIC_BITS

logger = logging.getLogger(__name__)

THETA_LOW = 1e-3
THETA_HIGH = 1e3
DELTA = 0.05

HISTOGRAM_DECADES = (-6, 6)


class ConstantsEstimate:
    """

    Finite-horizon estimates of the gauge constants: for every kind, the largest alpha
    of the grid whose power gauge min_{n <= N} n^alpha d(., .) falls below theta_low
    for at least a 1 - delta fraction of the samples. None when no alpha qualifies.

    """

    def __init__(
        self,
        alpha_grid: Sequence[float],
        horizon: int,
        samples: int,
        below: dict[str, list[float]],
        above: dict[str, list[float]],
        theta_low: float,
        theta_high: float,
        delta: float,
    ):
        self.alpha_grid = list(alpha_grid)
        self.horizon = horizon
        self.samples = samples
        self.below = below
        self.above = above
        self.theta_low = theta_low
        self.theta_high = theta_high
        self.delta = delta

    def constant(self, kind: str) -> float | None:
        qualifying = [
            alpha
            for alpha, fraction in zip(self.alpha_grid, self.below[kind])
            if fraction >= 1 - self.delta
        ]
        return max(qualifying) if qualifying else None

    def to_json(self) -> dict:
        return {
            "estimate": "finite-horizon",
            "horizon": self.horizon,
            "samples": self.samples,
            "theta_low": self.theta_low,
            "theta_high": self.theta_high,
            "delta": self.delta,
            "alpha_grid": self.alpha_grid,
            "kinds": {
                kind: {
                    "constant": self.constant(kind),
                    "below_fraction": self.below[kind],
                    "above_fraction": self.above[kind],
                }
                for kind in self.below
            },
        }


def power_minima(
    kind: str,
    iet: Iet,
    pairs: Sequence[tuple[int, int]],
    alphas: Sequence[float],
    horizon: int,
    metric: str = Metric.INTERVAL,
    bits: int = DYADIC_BITS,
) -> np.ndarray:
    """
    min_{n <= horizon} n^alpha d(., .) for every alpha (rows) and sample (columns).
    """

    xs = np.array([p[0] for p in pairs], dtype=np.int64)
    ys = np.array([p[1] for p in pairs], dtype=np.int64)
    orbit_x = BatchOrbit.from_dyadic(iet, xs, bits)
    orbit_y = BatchOrbit.from_dyadic(iet, ys, bits) if kind == GaugeKind.PSI else None
    fixed = (ys if kind == GaugeKind.PHI else xs).astype(np.float64) / 2.0**bits

    exponents = np.asarray(alphas, dtype=np.float64)[:, None]
    minima = np.full((len(alphas), len(pairs)), np.inf)
    for n in range(1, horizon + 1):
        orbit_x.step()
        other = fixed
        if orbit_y is not None:
            orbit_y.step()
            other = orbit_y.floats()
        distance = np.abs(orbit_x.floats() - other)
        if metric == Metric.CIRCLE:
            distance = np.minimum(distance, 1.0 - distance)
        np.minimum(minima, np.float64(n) ** exponents * distance[None, :], out=minima)
    return minima


def estimate_constants(
    iet: Iet,
    pairs: Sequence[tuple[int, int]],
    alpha_grid: Sequence[float],
    horizon: int,
    kinds: Sequence[str] = GaugeKind.ALL,
    metric: str = Metric.INTERVAL,
    theta_low: float = THETA_LOW,
    theta_high: float = THETA_HIGH,
    delta: float = DELTA,
) -> ConstantsEstimate:
    alpha_grid = [float(alpha) for alpha in alpha_grid]
    if not alpha_grid or any(a <= 0 for a in alpha_grid):
        raise ValueError("alpha grid must be non-empty and positive")
    if any(b <= a for a, b in zip(alpha_grid, alpha_grid[1:])):
        raise ValueError("alpha grid must be increasing")

    below = {}
    above = {}
    for kind in kinds:
        minima = power_minima(kind, iet, pairs, alpha_grid, horizon, metric)
        below[kind] = [float(np.mean(row < theta_low)) for row in minima]
        above[kind] = [float(np.mean(row > theta_high)) for row in minima]
        logger.debug("%s below fractions per alpha: %s", kind, below[kind])

    return ConstantsEstimate(
        alpha_grid, horizon, len(pairs), below, above, theta_low, theta_high, delta
    )


class PolarizationHistogram:
    """
    Counts of log10 window minima per horizon; the first and last bins collect
    everything below and above the decade range.
    """

    def __init__(
        self,
        kind: str,
        horizons: Sequence[int],
        edges: np.ndarray,
        counts: np.ndarray,
        samples: int,
    ):
        self.kind = kind
        self.horizons = list(horizons)
        self.edges = edges
        self.counts = counts
        self.samples = samples

    def fraction_below(self, threshold: float) -> list[float]:
        """Per horizon, the share of samples in bins entirely below threshold."""
        upper = self.edges[1:]
        mask = upper <= np.log10(threshold)
        return [float(row[mask].sum()) / self.samples for row in self.counts]

    def fraction_above(self, threshold: float) -> list[float]:
        lower = self.edges[:-1]
        mask = lower >= np.log10(threshold)
        return [float(row[mask].sum()) / self.samples for row in self.counts]

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "horizons": self.horizons,
            "log10_edges": [float(e) for e in self.edges],
            "counts": self.counts.tolist(),
            "samples": self.samples,
        }


def polarization_histogram(
    kind: str,
    iet: Iet,
    s: ScaleSequence,
    pairs: Sequence[tuple[int, int]],
    horizons: Sequence[int],
    metric: str = Metric.INTERVAL,
) -> PolarizationHistogram:
    flags = classify_scale(s)
    if not flags.two_jumpy:
        logger.warning(
            "Scale %s is not two-jumpy, extremality of the gauge is not expected",
            s.spec(),
        )

    traces = batch_traces(kind, iet, s, pairs, horizons, metric=metric)
    low, high = HISTOGRAM_DECADES
    edges = np.arange(low - 1, high + 2, dtype=np.float64)

    counts = np.zeros((len(horizons), len(edges) - 1), dtype=np.int64)
    for i in range(len(horizons)):
        minima = np.array([trace.window_min[i] for trace in traces])
        with np.errstate(divide="ignore"):
            logs = np.clip(np.log10(minima), low - 0.5, high + 0.5)
        counts[i], _ = np.histogram(logs, bins=edges)
    return PolarizationHistogram(kind, horizons, edges, counts, len(pairs))

from __future__ import annotations

import logging

import mpmath
import numpy as np

from interval_exchange.dioph.liouville import liouville_from_scale
from interval_exchange.gauges.constants import THETA_HIGH, THETA_LOW
from interval_exchange.gauges.scale_sequence import ScaleSequence, parse_scale
from interval_exchange.gauges.traces import dyadic_horizons
from interval_exchange.utils.error import BadLiteral
from interval_exchange.utils.exact_real import ExactReal
from interval_exchange.utils.literal_parser import parse_exact
from interval_exchange.utils.sampling import (
    DYADIC_BITS,
    dyadic_numerators,
    sample_stream,
)

logger = logging.getLogger(__name__)

FIXED_POINT_BITS = 64
CHUNK_SIZE = 65536


class PointSequence:
    """

    x_1, x_2, ... in [0, 1): 'zero' or the rotation orbit n alpha mod 1. The orbit is
    evaluated in 64-bit fixed point, floor(alpha 2^64) n mod 2^64, which is off by
    less than n 2^-64.

    """

    def __init__(self, spec: str, alpha: ExactReal | None):
        self.spec = spec
        self.alpha = alpha
        if alpha is None:
            self.__step = None
        else:
            with mpmath.workdps(60):
                scaled = alpha.frac().to_mpf(60) * mpmath.mpf(2) ** FIXED_POINT_BITS
                self.__step = np.uint64(int(mpmath.floor(scaled)))

    def values(self, first: int, last: int) -> np.ndarray:
        """x_n for first <= n <= last."""
        count = last - first + 1
        if self.__step is None:
            return np.zeros(count)
        n = np.arange(first, last + 1, dtype=np.uint64)
        with np.errstate(over="ignore"):
            fixed = n * self.__step
        return fixed.astype(np.float64) / 2.0**FIXED_POINT_BITS


def point_sequence(spec: str) -> PointSequence:
    """
    'zero', 'rotation:ALPHA' or 'liouville:K:SCALE', the orbit of the Liouville
    rotation built from SCALE with K leading partial quotients.
    """

    spec = spec.strip()
    if spec == "zero":
        return PointSequence(spec, None)
    kind, _, literal = spec.partition(":")
    if kind.strip() == "rotation" and literal:
        return PointSequence(spec, parse_exact(literal))
    if kind.strip() == "liouville" and literal:
        depth, _, scale = literal.partition(":")
        try:
            depth = int(depth)
        except ValueError as e:
            raise BadLiteral("Bad depth in point sequence '" + spec + "'") from e
        construction = liouville_from_scale(parse_scale(scale), depth)
        return PointSequence(spec, construction.alpha())
    raise BadLiteral("Unknown point sequence '" + spec + "'")


class DecisivenessReport:
    def __init__(
        self, horizons: list[int], middle: list[float], samples: int, spec: str
    ):
        self.horizons = horizons
        self.middle = middle
        self.samples = samples
        self.spec = spec

    def to_json(self) -> dict:
        return {
            "points": self.spec,
            "samples": self.samples,
            "horizons": self.horizons,
            "middle_fraction": self.middle,
            "theta_low": THETA_LOW,
            "theta_high": THETA_HIGH,
            "estimate": "finite-horizon",
        }


def decisiveness_diagnostic(
    points: PointSequence,
    s: ScaleSequence,
    samples: int,
    horizon: int,
    seed: int,
    theta_low: float = THETA_LOW,
    theta_high: float = THETA_HIGH,
) -> DecisivenessReport:
    """

    Share of uniform y whose contact gauge min s_n |x_n - y|, taken over each dyadic
    block (N/2, N], lies strictly between the thresholds.

    """

    ys = []
    remaining = samples
    chunk = 0
    while remaining > 0:
        size = min(CHUNK_SIZE, remaining)
        ys.append(dyadic_numerators(sample_stream(seed, chunk), size))
        remaining -= size
        chunk += 1
    y = np.concatenate(ys).astype(np.float64) / 2.0**DYADIC_BITS

    horizons = dyadic_horizons(horizon)
    s_values = s.values(horizon)
    middle = []
    start = max(1, s.first_index)
    for end in horizons:
        block = np.full(samples, np.inf)
        if end >= start:
            xs = points.values(start, end)
            for offset, x in enumerate(xs):
                np.minimum(block, s_values[start + offset] * np.abs(x - y), out=block)
        inside = (block > theta_low) & (block < theta_high)
        middle.append(float(np.mean(inside)))
        start = end + 1
    logger.debug("decisiveness middle fractions %s", middle)
    return DecisivenessReport(horizons, middle, samples, points.spec)

from __future__ import annotations

import logging
import math

import numpy as np

from interval_exchange.gauges.traces import Metric
from interval_exchange.iet.iet import Iet
from interval_exchange.iet.orbit import BatchOrbit
from interval_exchange.utils.error import DomainError
from interval_exchange.utils.parallel import parallel_map
from interval_exchange.utils.sampling import (
    DYADIC_BITS,
    dyadic_numerators,
    sample_stream,
)

logger = logging.getLogger(__name__)

CHUNK_SIZE = 65536
SIGMAS = 3.0


class BorelCantelliEstimate:
    """

    Monte Carlo estimate of the measure of
    U_n = {(x, y) : d(T^n x, T^n y) < min(d(T^{n-1} x, T^{n-1} y), n^-c)}
    with a 3 sigma interval and the bound 4 (r - 1) / n^(2c).

    """

    def __init__(self, n: int, c: float, samples: int, hits: int, bound: float):
        self.n = n
        self.c = c
        self.samples = samples
        self.hits = hits
        self.bound = bound

    @property
    def estimate(self) -> float:
        return self.hits / self.samples

    @property
    def sigma(self) -> float:
        p = self.estimate
        return math.sqrt(p * (1 - p) / self.samples)

    @property
    def interval(self) -> tuple[float, float]:
        return (
            max(0.0, self.estimate - SIGMAS * self.sigma),
            min(1.0, self.estimate + SIGMAS * self.sigma),
        )

    @property
    def respects_bound(self) -> bool:
        return self.interval[0] <= self.bound

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "c": self.c,
            "samples": self.samples,
            "hits": self.hits,
            "estimate": self.estimate,
            "interval": list(self.interval),
            "bound": self.bound,
            "respects_bound": self.respects_bound,
        }


def _count_chunk(task: tuple) -> int:
    iet, n, c, seed, chunk, size, metric = task
    rng = sample_stream(seed, chunk)
    xs = dyadic_numerators(rng, size)
    ys = dyadic_numerators(rng, size)
    orbit_x = BatchOrbit.from_dyadic(iet, xs, DYADIC_BITS)
    orbit_y = BatchOrbit.from_dyadic(iet, ys, DYADIC_BITS)

    def distance() -> np.ndarray:
        d = np.abs(orbit_x.floats() - orbit_y.floats())
        if metric == Metric.CIRCLE:
            d = np.minimum(d, 1.0 - d)
        return d

    for _ in range(n - 1):
        orbit_x.step()
        orbit_y.step()
    before = distance()
    orbit_x.step()
    orbit_y.step()
    after = distance()
    return int(np.count_nonzero(after < np.minimum(before, float(n) ** -c)))


def proximality_bc_measure(
    iet: Iet,
    n: int,
    c: float,
    samples: int,
    seed: int,
    metric: str = Metric.INTERVAL,
    workers: int | None = None,
) -> BorelCantelliEstimate:
    """
    Chunks of CHUNK_SIZE pairs draw from their own stream, so the estimate does not
    depend on the worker count.
    """

    if n < 2:
        raise DomainError("proximality_bc_measure needs n >= 2")
    if c <= 0.5:
        raise DomainError("The exponent c must exceed 1/2, got " + str(c))

    tasks = []
    remaining = samples
    chunk = 0
    while remaining > 0:
        size = min(CHUNK_SIZE, remaining)
        tasks.append((iet, n, c, seed, chunk, size, metric))
        remaining -= size
        chunk += 1

    hits = sum(parallel_map(_count_chunk, tasks, workers))
    bound = 4 * (iet.canonical().r - 1) / n ** (2 * c)
    estimate = BorelCantelliEstimate(n, c, samples, hits, bound)
    logger.info(
        "U_%s: %s of %s pairs (bound %.3e)", n, hits, samples, bound
    )
    return estimate

import logging
import math
from fractions import Fraction

import numpy as np
import pytest

from lab_logging.log_helper import setup_recursive_logger

setup_recursive_logger(logging.INFO)
logger = logging.getLogger(__name__)

from interval_exchange.gauges.constants import (
    THETA_HIGH,
    THETA_LOW,
    estimate_constants,
    polarization_histogram,
    power_minima,
)
from interval_exchange.gauges.scale_sequence import PowerScale
from interval_exchange.gauges.traces import (
    GaugeKind,
    Metric,
    batch_traces,
    dyadic_horizons,
    gauge_trace,
)
from interval_exchange.iet.iet import identity, rotation
from interval_exchange.induce.induced_map import iet3_from_rotation
from interval_exchange.utils.sampling import DYADIC_BITS, sample_pairs
from test_helper.oracles import GOLDEN, SQRT2_MINUS_1

LINEAR = PowerScale(1)


def test_dyadic_horizons():
    assert dyadic_horizons(1000) == [2, 4, 8, 16, 32, 64, 128, 256, 512, 1000]
    assert dyadic_horizons(1024) == [2, 4, 8, 16, 32, 64, 128, 256, 512, 1024]
    assert dyadic_horizons(2) == [2]


def test_golden_recurrence_gauge_tends_to_inverse_sqrt5():
    horizons = dyadic_horizons(2**12)
    trace = gauge_trace(
        GaugeKind.RHO,
        rotation(GOLDEN),
        LINEAR,
        Fraction(1, 3),
        horizons=horizons,
        metric=Metric.CIRCLE,
    )
    # 2584 is the only Fibonacci number in (2048, 4096]
    assert trace.window_argmin[-1] == 2584
    assert abs(trace.final_window_min() - 1 / math.sqrt(5)) < 1e-6
    assert trace.running_min == sorted(trace.running_min, reverse=True)
    assert all(n <= horizon for n, horizon in zip(trace.argmin, horizons))


def test_exact_rows_carry_exact_minima():
    trace = gauge_trace(
        GaugeKind.RHO,
        rotation(GOLDEN),
        LINEAR,
        Fraction(1, 3),
        horizons=[8, 64],
        metric=Metric.CIRCLE,
    )
    rows = trace.rows(exact=True)
    assert [row[3] for row in rows] == [8, 64]
    assert "sqrt(5)" in rows[-1][4]
    assert trace.rows()[-1][4] == repr(trace.running_min[-1])
    assert rows[0][2] == ""


def test_phi_on_identity_is_attained_at_first_step():
    x, y = Fraction(1, 8), Fraction(5, 8)
    trace = gauge_trace(GaugeKind.PHI, identity(), LINEAR, x, y, horizons=[16])
    assert trace.running_min == [0.5]
    assert trace.argmin == [1]
    assert trace.exact_min == ["1/2"]


def test_psi_on_rotation_keeps_circle_distance():
    x, y = Fraction(1, 10), Fraction(3, 10)
    trace = gauge_trace(
        GaugeKind.PSI,
        rotation(SQRT2_MINUS_1),
        LINEAR,
        x,
        y,
        horizons=[4, 32],
        metric=Metric.CIRCLE,
    )
    assert trace.running_min == [pytest.approx(0.2), pytest.approx(0.2)]
    assert trace.argmin == [1, 1]


def test_gauge_trace_argument_checks():
    with pytest.raises(ValueError):
        gauge_trace("theta", identity(), LINEAR, 0, 0)
    with pytest.raises(ValueError):
        gauge_trace(GaugeKind.RHO, identity(), LINEAR, 0, Fraction(1, 2))
    with pytest.raises(ValueError):
        gauge_trace(GaugeKind.PHI, identity(), LINEAR, 0)
    with pytest.raises(ValueError):
        gauge_trace(GaugeKind.RHO, identity(), LINEAR, 0, horizons=[8, 8])


@pytest.mark.parametrize("kind", GaugeKind.ALL)
def test_batch_traces_agree_with_exact_scan(kind):
    iet = iet3_from_rotation(GOLDEN, Fraction(1, 2))
    pairs = sample_pairs(seed=7, count=3)
    horizons = [16, 256]
    batch = batch_traces(kind, iet, LINEAR, pairs, horizons)
    for pair, fast in zip(pairs, batch):
        x = Fraction(pair[0], 2**DYADIC_BITS)
        y = None if kind == GaugeKind.RHO else Fraction(pair[1], 2**DYADIC_BITS)
        slow = gauge_trace(kind, iet, LINEAR, x, y, horizons=horizons)
        assert fast.argmin == slow.argmin
        assert fast.running_min == pytest.approx(slow.running_min, rel=1e-9)
        assert fast.exact_min[-1] == slow.exact_min[-1]


def test_sample_pairs_do_not_depend_on_count():
    assert sample_pairs(3, 5)[:2] == sample_pairs(3, 2)
    assert sample_pairs(3, 2) != sample_pairs(4, 2)
    assert all(0 <= x < 2**DYADIC_BITS for pair in sample_pairs(3, 5) for x in pair)


def test_power_minima_match_linear_traces():
    iet = rotation(GOLDEN)
    pairs = sample_pairs(seed=1, count=4)
    minima = power_minima(GaugeKind.PHI, iet, pairs, [1.0, 2.0], 128)
    traces = batch_traces(GaugeKind.PHI, iet, LINEAR, pairs, [128])
    assert minima[0] == pytest.approx([trace.running_min[-1] for trace in traces])
    assert np.all(minima[1] >= minima[0])


def test_constants_on_identity():
    pairs = sample_pairs(seed=2, count=200)
    estimate = estimate_constants(
        identity(), pairs, [0.5, 1.0, 2.0], 64, kinds=[GaugeKind.RHO, GaugeKind.PSI]
    )
    # d(x, x) = 0 at every step, d(x, y) never shrinks
    assert estimate.constant(GaugeKind.RHO) == 2.0
    assert estimate.constant(GaugeKind.PSI) is None
    data = estimate.to_json()
    assert data["kinds"]["rho"]["below_fraction"] == [1.0, 1.0, 1.0]
    assert data["theta_low"] == THETA_LOW


def test_constants_reject_bad_grids():
    pairs = sample_pairs(seed=2, count=4)
    with pytest.raises(ValueError):
        estimate_constants(identity(), pairs, [], 8)
    with pytest.raises(ValueError):
        estimate_constants(identity(), pairs, [2.0, 1.0], 8)


def test_polarization_histogram_counts_every_sample():
    pairs = sample_pairs(seed=5, count=50)
    histogram = polarization_histogram(
        GaugeKind.RHO, identity(), LINEAR, pairs, [8, 64]
    )
    assert histogram.counts.sum(axis=1).tolist() == [50, 50]
    assert histogram.fraction_below(THETA_LOW) == [1.0, 1.0]
    assert histogram.fraction_above(THETA_HIGH) == [0.0, 0.0]
    assert histogram.to_json()["samples"] == 50

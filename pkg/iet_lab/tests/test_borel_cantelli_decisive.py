from fractions import Fraction

import pytest

from interval_exchange.gauges.borel_cantelli import CHUNK_SIZE, proximality_bc_measure
from interval_exchange.gauges.decisiveness import (
    decisiveness_diagnostic,
    point_sequence,
)
from interval_exchange.gauges.scale_sequence import PowerScale
from interval_exchange.gauges.traces import Metric, dyadic_horizons
from interval_exchange.iet.iet import identity, rotation
from interval_exchange.induce.induced_map import iet3_from_rotation
from interval_exchange.utils.error import BadLiteral, DomainError
from test_helper.oracles import GOLDEN


def test_identity_never_brings_points_closer():
    estimate = proximality_bc_measure(identity(), 8, 1.0, 500, seed=3)
    assert estimate.hits == 0
    assert estimate.interval == (0.0, 0.0)
    assert estimate.respects_bound


def test_three_interval_map_respects_bound():
    iet = iet3_from_rotation(GOLDEN, Fraction(1, 2))
    estimate = proximality_bc_measure(iet, 16, 1.0, 4000, seed=11)
    assert estimate.bound == pytest.approx(4 * (iet.canonical().r - 1) / 16**2)
    assert estimate.respects_bound
    data = estimate.to_json()
    assert data["samples"] == 4000
    assert 0.0 <= data["estimate"] <= 1.0


def test_rotation_is_an_isometry_of_the_circle():
    estimate = proximality_bc_measure(
        rotation(Fraction(1, 2)), 12, 0.75, 1000, seed=5, metric=Metric.CIRCLE
    )
    assert estimate.hits == 0


def test_estimate_does_not_depend_on_worker_count():
    iet = iet3_from_rotation(GOLDEN, Fraction(1, 2))
    samples = CHUNK_SIZE + 300
    serial = proximality_bc_measure(iet, 3, 0.75, samples, seed=8, workers=1)
    pooled = proximality_bc_measure(iet, 3, 0.75, samples, seed=8, workers=2)
    assert serial.hits == pooled.hits


def test_borel_cantelli_domain_errors():
    with pytest.raises(DomainError):
        proximality_bc_measure(identity(), 1, 1.0, 10, seed=0)
    with pytest.raises(DomainError):
        proximality_bc_measure(identity(), 4, 0.5, 10, seed=0)


def test_point_sequences():
    assert point_sequence("zero").values(1, 4).tolist() == [0.0] * 4
    golden = point_sequence("rotation:golden")
    assert golden.alpha == GOLDEN
    assert golden.values(1, 2).tolist() == pytest.approx(
        [float(GOLDEN), (2 * float(GOLDEN)) % 1.0]
    )
    assert point_sequence("liouville:3:pow:2").alpha is not None


@pytest.mark.parametrize("text", ["bogus", "liouville:x:pow:2", "rotation:"])
def test_point_sequence_rejects(text):
    with pytest.raises(BadLiteral):
        point_sequence(text)


def test_decisiveness_of_constant_points_drains_middle():
    # (N/2)^2 |y| leaves (1e-3, 1e3) for all but about 1e3 / (N/2)^2 of the y
    report = decisiveness_diagnostic(
        point_sequence("zero"), PowerScale(2), 1000, 2**16, seed=4
    )
    assert report.horizons == dyadic_horizons(2**16)
    assert report.middle[-1] < 0.01
    assert report.to_json()["middle_fraction"] == report.middle


def test_decisiveness_is_reproducible():
    points = point_sequence("rotation:golden")
    first = decisiveness_diagnostic(points, PowerScale(1), 300, 1024, seed=9)
    second = decisiveness_diagnostic(points, PowerScale(1), 300, 1024, seed=9)
    assert first.middle == second.middle
    assert all(0.0 <= value <= 1.0 for value in first.middle)

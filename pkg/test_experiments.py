import math

import numpy as np
import pytest
from pydantic import ValidationError

from core import GeometryError, InvalidParameterError
from models import AntennaArray, CrlbField, Point3, RangeModel, ServiceArea
from schemas import SweepSchemaIn
from services import CrlbService, ExperimentService, GeometryService

MODEL = RangeModel(k_e=0.01)
DEFAULT_RESOLUTION = (200, 50)


@pytest.fixture(scope="module")
def area():
    return ServiceArea(d_w=10, d_l=40, exclusion_side=1)


@pytest.fixture(scope="module")
def pinching(area):
    return GeometryService.make_waveguide_array(2, 10, area, 3)


@pytest.fixture(scope="module")
def conventional():
    return GeometryService.make_circular_array(20, 0.01, 3)


@pytest.fixture(scope="module")
def pinching_field(pinching, area):
    return ExperimentService.heatmap(MODEL, pinching, area, DEFAULT_RESOLUTION)


@pytest.fixture(scope="module")
def conventional_field(conventional, area):
    return ExperimentService.heatmap(MODEL, conventional, area, DEFAULT_RESOLUTION)


def synthetic_field(values):
    values = np.asarray(values, dtype=float)
    ny, nx = values.shape
    return CrlbField(area=ServiceArea(d_w=ny, d_l=nx), nx=nx, ny=ny, values=values)


def test_single_cell_average_is_centre_value(pinching):
    open_area = ServiceArea(d_w=10, d_l=40)
    average = ExperimentService.averaged_crlb(MODEL, pinching, open_area, (1, 1))
    assert average == pytest.approx(
        CrlbService.crlb(MODEL, Point3(x=0, y=0), pinching).value, rel=1e-12
    )


def test_average_is_not_finite_with_a_singular_cell():
    array = AntennaArray(antennas=(Point3(x=0, y=0, z=3),), height=3)
    open_area = ServiceArea(d_w=10, d_l=40)
    assert ExperimentService.averaged_crlb(MODEL, array, open_area, (3, 3)) == math.inf
    excluding = ServiceArea(d_w=10, d_l=40, exclusion_side=1)
    assert math.isfinite(ExperimentService.averaged_crlb(MODEL, array, excluding, (3, 3)))


def test_pinching_average_beats_conventional(pinching, conventional, area):
    pin = ExperimentService.averaged_crlb(MODEL, pinching, area, DEFAULT_RESOLUTION)
    conv = ExperimentService.averaged_crlb(MODEL, conventional, area, DEFAULT_RESOLUTION)
    assert pin < conv


def test_pinching_average_converges(pinching, area):
    coarse = ExperimentService.averaged_crlb(MODEL, pinching, area, (100, 25))
    fine = ExperimentService.averaged_crlb(MODEL, pinching, area, (400, 100))
    assert abs(fine - coarse) / fine < 0.01


def test_delta_crb_of_identical_arrays_is_zero(pinching, area):
    assert ExperimentService.delta_crb(MODEL, pinching, pinching, area, DEFAULT_RESOLUTION) == 0


def test_delta_crb_defaults(pinching, conventional, area):
    delta = ExperimentService.delta_crb(MODEL, pinching, conventional, area, DEFAULT_RESOLUTION)
    assert math.isfinite(delta)
    assert delta < 0


@pytest.mark.parametrize("exclusion_side", [1.0, 2.0])
def test_pinching_dominates_for_every_size(exclusion_side):
    area = ServiceArea(d_w=10, d_l=40, exclusion_side=exclusion_side)
    rows = ExperimentService.compare_sizes(
        MODEL, area, [4, 8, 12, 16, 20], 2, 3, 0.01, DEFAULT_RESOLUTION
    )
    assert [row.n for row in rows] == [4, 8, 12, 16, 20]
    for row in rows:
        assert row.pinching < row.conventional
        assert row.delta_crb == pytest.approx(row.pinching - row.conventional)


def test_compare_rejects_uneven_split(area):
    with pytest.raises(InvalidParameterError):
        ExperimentService.compare_sizes(MODEL, area, [5], 2, 3, 0.01, DEFAULT_RESOLUTION)


def test_heatmap_shape(pinching_field):
    assert pinching_field.values.shape == (50, 200)
    assert pinching_field.array_id == "pinching-20"


def test_heatmap_is_symmetric(pinching_field):
    values = pinching_field.values
    np.testing.assert_allclose(values[:, ::-1], values, rtol=1e-12)
    np.testing.assert_allclose(values[::-1, :], values, rtol=1e-12)


def test_heatmap_rejects_low_resolution(pinching, area):
    with pytest.raises(InvalidParameterError):
        ExperimentService.heatmap(MODEL, pinching, area, (8, 8))


def test_conventional_field_blows_up_along_the_axis(conventional_field):
    xs, ys = conventional_field.xs, conventional_field.ys
    iy = int(np.argmin(np.abs(ys - 0.1)))
    far = conventional_field.cell(len(xs) - 1, iy).value
    near = conventional_field.cell(int(np.argmin(np.abs(xs - 0.7))), iy).value
    assert far > 100 * near


def test_pinching_field_is_fair(pinching_field, conventional_field):
    pin = ExperimentService.fairness_ratio(pinching_field)
    conv = ExperimentService.fairness_ratio(conventional_field)
    assert pin < 1e3
    assert 10 * pin < conv


def test_local_maxima_near_interior_antennas(pinching, area):
    field = ExperimentService.heatmap(MODEL, pinching, area, (400, 100))
    maxima = ExperimentService.local_maxima(field)
    interior = GeometryService.interior_antennas(pinching, area)
    assert len(interior) == 12
    for antenna in interior:
        assert any(math.hypot(p.x - antenna.x, p.y - antenna.y) <= 0.5 for p in maxima)
    assert [(p.y, p.x) for p in maxima] == sorted((p.y, p.x) for p in maxima)


def test_local_maxima_of_monotone_field():
    values = np.tile(np.arange(20.0), (10, 1))
    assert ExperimentService.local_maxima(synthetic_field(values)) == []


def test_local_maxima_of_plateau():
    assert ExperimentService.local_maxima(synthetic_field(np.ones((10, 20)))) == []


def test_local_maxima_finds_single_bump():
    values = np.zeros((5, 6))
    values[2, 3] = 1.0
    values[0, 0] = 5.0
    field = synthetic_field(values)
    maxima = ExperimentService.local_maxima(field)
    assert maxima == [Point3(x=float(field.xs[3]), y=float(field.ys[2]))]


def test_spacing_sweep_argmin():
    curve = ExperimentService.spacing_sweep(1, 3, 0.01, SweepSchemaIn().deltas())
    assert curve.best_spacing == pytest.approx(4.2)
    assert curve.is_unimodal()
    rescaled = ExperimentService.spacing_sweep(1, 3, 0.1, SweepSchemaIn().deltas())
    assert rescaled.argmin == curve.argmin


@pytest.mark.parametrize("n_bar", [1, 2, 3, 4])
def test_spacing_sweeps_are_unimodal(n_bar):
    deltas = [0.2 + 0.1 * k for k in range(199)]
    assert ExperimentService.spacing_sweep(n_bar, 3, 0.01, deltas).is_unimodal()


def test_spacing_sweep_rejects_bad_spacings():
    with pytest.raises(InvalidParameterError):
        ExperimentService.spacing_sweep(1, 3, 0.01, [0.0, 1.0])
    with pytest.raises(ValidationError):
        ExperimentService.spacing_sweep(1, 3, 0.01, [2.0, 1.0])


def test_focal_fields_are_mirror_images(area):
    left = ExperimentService.focal_experiment(MODEL, area, -10, 20, 2, 3, DEFAULT_RESOLUTION)
    right = ExperimentService.focal_experiment(MODEL, area, 10, 20, 2, 3, DEFAULT_RESOLUTION)
    for field, focal_x in ((left, -10), (right, 10)):
        best = ExperimentService.best_cell(field)
        assert math.hypot(best.x - focal_x, best.y) <= 2
    np.testing.assert_allclose(right.values, left.values[:, ::-1], rtol=1e-12)


def test_full_span_focal_field_is_the_default_heatmap(area, pinching_field):
    field = ExperimentService.focal_experiment(
        MODEL, area, 0, 20, 2, 3, DEFAULT_RESOLUTION, segment_length=area.d_l
    )
    assert np.array_equal(field.values, pinching_field.values)


def test_focal_segment_outside_area(area):
    with pytest.raises(GeometryError):
        ExperimentService.focal_experiment(MODEL, area, -15, 20, 2, 3, DEFAULT_RESOLUTION)


def test_conventional_singularity_trend(area):
    values = ExperimentService.conventional_singularity_trend(
        MODEL, area, 20, 3, [0.1, 0.03, 0.01, 0.003]
    )
    assert all(b > a for a, b in zip(values, values[1:]))


def test_pinching_is_bounded_at_the_area_edge(pinching, area):
    value, bound = ExperimentService.edge_bound_check(MODEL, area, pinching)
    assert math.isfinite(value)
    assert value <= bound


def test_gradient_check_passes_on_default_area(pinching, area):
    report = ExperimentService.gradient_check(MODEL, pinching, area)
    assert report.probes == 400
    assert report.skipped == 0
    assert report.passed
    assert report.max_relative_error < 1e-6


def test_gradient_check_skips_singular_probes(area):
    array = AntennaArray(antennas=(Point3(x=1, y=0.25, z=3),), height=3)
    report = ExperimentService.gradient_check(MODEL, array, area)
    assert report.skipped > 0
    assert report.probes == 400

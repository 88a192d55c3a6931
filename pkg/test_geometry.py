import math

import numpy as np
import pytest
from pydantic import ValidationError

from core import GeometryError, InvalidParameterError
from models import AntennaArray, Point3, ServiceArea
from services import GeometryService


@pytest.fixture(scope="module")
def area():
    return ServiceArea(d_w=10, d_l=40, exclusion_side=1)


def as_set(array):
    return {tuple(np.round(p, 12)) for p in array.positions}


@pytest.mark.parametrize(
    "user, antenna, expected",
    [
        (Point3(x=0, y=0), Point3(x=0, y=0, z=3), 3.0),
        (Point3(x=1, y=2), Point3(x=4, y=6, z=3), math.sqrt(34)),
        (Point3(x=20, y=0), Point3(x=0, y=0, z=3), math.sqrt(409)),
    ],
)
def test_distance(user, antenna, expected):
    assert GeometryService.distance(user, antenna) == pytest.approx(expected, rel=1e-12)


def test_distance_rejects_ground_antenna():
    with pytest.raises(GeometryError):
        GeometryService.distance(Point3(x=0, y=0), Point3(x=1, y=1, z=0))


def test_point_rejects_non_finite():
    with pytest.raises(ValidationError):
        Point3(x=math.inf, y=0)


def test_service_area_rejects_large_exclusion():
    with pytest.raises(ValidationError):
        ServiceArea(d_w=10, d_l=40, exclusion_side=12)


def test_cell_centers_are_symmetric(area):
    xs, ys = area.cell_centers(200, 50)
    assert np.array_equal(xs, -xs[::-1])
    assert np.array_equal(ys, -ys[::-1])
    assert xs[0] == pytest.approx(-19.9)
    assert ys[0] == pytest.approx(-4.9)


def test_exclusion_mask(area):
    xs, ys = area.cell_centers(80, 20)
    mask = area.excluded(xs, ys)
    assert mask.shape == (20, 80)
    assert mask.sum() == 4
    assert not area.excluded(*area.cell_centers(40, 10)).any()


def test_single_waveguide_antenna_sits_at_centre(area):
    array = GeometryService.make_waveguide_array(1, 1, area, 3)
    assert array.antennas == (Point3(x=0, y=0, z=3),)


def test_default_waveguide_layout(area):
    array = GeometryService.make_waveguide_array(2, 10, area, 3)
    assert array.size == 20
    assert sorted({round(a.x, 9) for a in array.antennas}) == list(range(-18, 19, 4))
    assert sorted({a.y for a in array.antennas}) == [-2.5, 2.5]
    assert all(a.z == 3 for a in array.antennas)
    assert array.waveguide_index == (0,) * 10 + (1,) * 10


def test_waveguide_array_small(area):
    array = GeometryService.make_waveguide_array(2, 2, area, 3)
    assert array.size == 4
    assert len(as_set(array)) == 4


def test_waveguide_array_rejects_empty(area):
    with pytest.raises(InvalidParameterError):
        GeometryService.make_waveguide_array(0, 10, area, 3)


@pytest.mark.parametrize("n", [2, 3, 4, 7, 20, 64])
def test_circular_min_spacing_is_half_wavelength(n):
    array = GeometryService.make_circular_array(n, 0.01, 3)
    assert array.size == n
    assert GeometryService.min_pairwise_distance(array) == pytest.approx(0.005, rel=1e-12)


def test_circular_radius():
    two = GeometryService.make_circular_array(2, 0.01, 3)
    assert sorted(a.x for a in two.antennas) == pytest.approx([-0.0025, 0.0025])
    four = GeometryService.make_circular_array(4, 0.01, 3)
    radius = math.hypot(four.antennas[0].x, four.antennas[0].y)
    assert radius == pytest.approx(0.0035355339, rel=1e-8)


def test_square_cluster_single_quadrant():
    array = GeometryService.make_square_cluster(Point3(x=0, y=0), 2.0, 1, 3)
    assert as_set(array) == {(sx, sy, 3.0) for sx in (-1.0, 1.0) for sy in (-1.0, 1.0)}


def test_square_cluster_offsets():
    array = GeometryService.make_square_cluster(Point3(x=0, y=0), 2.0, 2, 3)
    assert array.size == 16
    assert sorted({a.x for a in array.antennas}) == [-3, -1, 1, 3]


@pytest.mark.parametrize("n_bar", [1, 2, 3])
def test_square_cluster_reflection_invariant(n_bar):
    centre = Point3(x=1.5, y=-0.5)
    array = GeometryService.make_square_cluster(centre, 1.3, n_bar, 2)
    points = as_set(array)
    mirrored_x = {(round(2 * centre.x - x, 12), y, z) for x, y, z in points}
    mirrored_y = {(x, round(2 * centre.y - y, 12), z) for x, y, z in points}
    assert mirrored_x == points
    assert mirrored_y == points


def test_focal_segment_spans_left_half(area):
    array = GeometryService.make_focal_segment_array(-10, 20, 2, 10, area, 3)
    xs = [a.x for a in array.antennas]
    assert min(xs) > -20 and max(xs) < 0
    assert array.size == 20


def test_focal_segments_are_mirror_images(area):
    left = GeometryService.make_focal_segment_array(-10, 20, 2, 10, area, 3)
    right = GeometryService.make_focal_segment_array(10, 20, 2, 10, area, 3)
    assert {(-x, y, z) for x, y, z in as_set(left)} == as_set(right)


def test_full_span_focal_segment_matches_waveguide_array(area):
    focal = GeometryService.make_focal_segment_array(0, area.d_l, 2, 10, area, 3)
    default = GeometryService.make_waveguide_array(2, 10, area, 3)
    assert focal.antennas == default.antennas


def test_focal_segment_outside_area_is_rejected(area):
    with pytest.raises(GeometryError):
        GeometryService.make_focal_segment_array(-15, 20, 2, 10, area, 3)


def test_array_rejects_duplicates():
    antenna = Point3(x=0, y=0, z=3)
    with pytest.raises(ValidationError):
        AntennaArray(antennas=(antenna, antenna), height=3)


def test_array_rejects_mixed_heights():
    with pytest.raises(ValidationError):
        AntennaArray(
            antennas=(Point3(x=0, y=0, z=3), Point3(x=1, y=0, z=2)), height=3
        )


def test_interior_antennas(area):
    array = GeometryService.make_waveguide_array(2, 10, area, 3)
    interior = GeometryService.interior_antennas(array, area)
    assert len(interior) == 12
    assert all(abs(a.x) <= 10 for a in interior)

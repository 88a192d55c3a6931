import math

import numpy as np

from core import GeometryError, InvalidParameterError, get_logger
from models import AntennaArray, Point3, ServiceArea

log = get_logger("geometry")


def _midpoints(count: int, length: float) -> np.ndarray:
    # ((2k - 1 - n) / 2n) * L keeps the layout exactly symmetric about 0
    return (2 * np.arange(1, count + 1) - 1 - count) / (2 * count) * length


class GeometryService:
    """
    Distances and the antenna-array generators used by the experiments.

    Methods:
        distance(user, antenna) -> float:
            Euclidean user-antenna distance.

        make_waveguide_array(n_wg, n_per_wg, area, height) -> AntennaArray:
            Pinching antennas equally spaced along waveguides parallel to x.

        make_focal_segment_array(focal_x, segment_length, n_wg, n_per_wg, area, height) -> AntennaArray:
            Same waveguides, antennas confined to a segment around a focal point.

        make_circular_array(n, wavelength, height) -> AntennaArray:
            Conventional benchmark: circle with lambda/2 minimum spacing.

        make_square_cluster(center, spacing, n_bar, height) -> AntennaArray:
            (2 n_bar) x (2 n_bar) grid centred on a user.
    """

    @classmethod
    def distance(cls, user: Point3, antenna: Point3) -> float:
        if antenna.z <= 0:
            raise GeometryError(f"antenna height must be positive, got {antenna.z}")
        return math.sqrt(
            (user.x - antenna.x) ** 2 + (user.y - antenna.y) ** 2 + antenna.z**2
        )

    @classmethod
    def waveguide_offsets(cls, n_wg: int, area: ServiceArea) -> np.ndarray:
        """y-coordinates of the waveguides: midpoint rule across D_W."""
        return _midpoints(n_wg, area.d_w)

    @classmethod
    def _along_waveguides(
        cls,
        xs: np.ndarray,
        n_wg: int,
        area: ServiceArea,
        height: float,
        label: str,
    ) -> AntennaArray:
        antennas, tags = [], []
        for j, y in enumerate(cls.waveguide_offsets(n_wg, area)):
            for x in xs:
                antennas.append(Point3(x=float(x), y=float(y), z=height))
                tags.append(j)
        return AntennaArray(
            antennas=tuple(antennas),
            height=height,
            waveguide_index=tuple(tags),
            label=label,
        )

    @classmethod
    def make_waveguide_array(
        cls, n_wg: int, n_per_wg: int, area: ServiceArea, height: float
    ) -> AntennaArray:
        if n_wg < 1 or n_per_wg < 1:
            raise InvalidParameterError("n_wg and n_per_wg must both be at least 1")
        log.debug("waveguide array: %d x %d at height %g", n_wg, n_per_wg, height)
        return cls._along_waveguides(
            _midpoints(n_per_wg, area.d_l),
            n_wg,
            area,
            height,
            label=f"pinching-{n_wg * n_per_wg}",
        )

    @classmethod
    def make_focal_segment_array(
        cls,
        focal_x: float,
        segment_length: float,
        n_wg: int,
        n_per_wg: int,
        area: ServiceArea,
        height: float,
    ) -> AntennaArray:
        """
        Activate the antennas of every waveguide inside one segment.

        Raises:
            GeometryError: If the segment leaves [-D_L/2, D_L/2].
        """
        if segment_length <= 0:
            raise InvalidParameterError("segment_length must be positive")
        lower, upper = focal_x - segment_length / 2, focal_x + segment_length / 2
        if lower < -area.d_l / 2 or upper > area.d_l / 2:
            raise GeometryError(
                f"segment [{lower:g}, {upper:g}] extends beyond the service area "
                f"length [{-area.d_l / 2:g}, {area.d_l / 2:g}]"
            )
        if n_wg < 1 or n_per_wg < 1:
            raise InvalidParameterError("n_wg and n_per_wg must both be at least 1")
        return cls._along_waveguides(
            focal_x + _midpoints(n_per_wg, segment_length),
            n_wg,
            area,
            height,
            label=f"focal-{focal_x:g}",
        )

    @classmethod
    def make_circular_array(
        cls, n: int, wavelength: float, height: float
    ) -> AntennaArray:
        if n < 2:
            raise InvalidParameterError("a circular array needs at least 2 antennas")
        if wavelength <= 0:
            raise InvalidParameterError("wavelength must be positive")
        radius = wavelength / (4 * math.sin(math.pi / n))
        antennas = tuple(
            Point3(
                x=radius * math.cos(2 * math.pi * k / n),
                y=radius * math.sin(2 * math.pi * k / n),
                z=height,
            )
            for k in range(n)
        )
        return AntennaArray(antennas=antennas, height=height, label=f"conventional-{n}")

    @classmethod
    def make_square_cluster(
        cls, center: Point3, spacing: float, n_bar: int, height: float
    ) -> AntennaArray:
        if spacing <= 0:
            raise InvalidParameterError("spacing must be positive")
        if n_bar < 1:
            raise InvalidParameterError("n_bar must be at least 1")
        offsets = (np.arange(1, n_bar + 1) - 0.5) * spacing
        offsets = np.concatenate([-offsets[::-1], offsets])
        antennas = tuple(
            Point3(x=center.x + float(dx), y=center.y + float(dy), z=height)
            for dy in offsets
            for dx in offsets
        )
        return AntennaArray(
            antennas=antennas, height=height, label=f"square-{4 * n_bar**2}"
        )

    @classmethod
    def interior_antennas(cls, array: AntennaArray, area: ServiceArea) -> list[Point3]:
        """Antennas whose ground projection lies in the central half of D_L."""
        return [a for a in array.antennas if abs(a.x) <= area.d_l / 4]

    @classmethod
    def min_pairwise_distance(cls, array: AntennaArray) -> float:
        positions = array.positions
        gaps = np.linalg.norm(positions[:, None, :] - positions[None, :, :], axis=-1)
        return float(gaps[~np.eye(array.size, dtype=bool)].min())

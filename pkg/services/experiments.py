import math

import numpy as np

from core import InvalidParameterError, SingularityError, get_logger
from models import (
    AntennaArray,
    CrlbField,
    Point3,
    RangeModel,
    ServiceArea,
    SquareGridSpec,
    SweepCurve,
)
from schemas import CompareRow, GradientCheckReport
from services.closed_form import ClosedFormService
from services.crlb import CrlbService
from services.geometry import GeometryService

log = get_logger("experiments")

MIN_HEATMAP_RESOLUTION = 16
GRADIENT_STEP = 1e-5
GRADIENT_TOLERANCE = 1e-6


class ExperimentService:
    """
    Area averages, heatmaps, local-maximum detection, spacing sweeps, focal
    placements and the validation checks built on them.
    """

    @classmethod
    def _field_values(
        cls,
        model: RangeModel,
        array: AntennaArray,
        area: ServiceArea,
        resolution: tuple[int, int],
    ) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        nx, ny = resolution
        if nx < 1 or ny < 1:
            raise InvalidParameterError(f"resolution {nx}x{ny} must be positive")
        xs, ys = area.cell_centers(nx, ny)
        grid_x, grid_y = np.meshgrid(xs, ys)
        return xs, ys, CrlbService.crlb_grid(model, grid_x, grid_y, array)

    @classmethod
    def averaged_crlb(
        cls,
        model: RangeModel,
        array: AntennaArray,
        area: ServiceArea,
        resolution: tuple[int, int],
    ) -> float:
        """
        Midpoint-rule average of the CRLB over the area, exclusion square skipped.

        Returns inf when any kept cell is non-finite.
        """
        xs, ys, values = cls._field_values(model, array, area, resolution)
        kept = values[~area.excluded(xs, ys)]
        if kept.size == 0:
            raise InvalidParameterError("every cell lies inside the exclusion square")
        log.debug("averaging %d cells for %s", kept.size, array.label)
        # fixed-order reduction
        return float(np.sum(kept) / kept.size)

    @classmethod
    def delta_crb(
        cls,
        model: RangeModel,
        pin: AntennaArray,
        conv: AntennaArray,
        area: ServiceArea,
        resolution: tuple[int, int],
    ) -> float:
        return cls.averaged_crlb(model, pin, area, resolution) - cls.averaged_crlb(
            model, conv, area, resolution
        )

    @classmethod
    def heatmap(
        cls,
        model: RangeModel,
        array: AntennaArray,
        area: ServiceArea,
        resolution: tuple[int, int],
    ) -> CrlbField:
        nx, ny = resolution
        if nx < MIN_HEATMAP_RESOLUTION or ny < MIN_HEATMAP_RESOLUTION:
            raise InvalidParameterError(
                f"heatmap resolution must be at least "
                f"{MIN_HEATMAP_RESOLUTION}x{MIN_HEATMAP_RESOLUTION}, got {nx}x{ny}"
            )
        _, _, values = cls._field_values(model, array, area, resolution)
        return CrlbField(area=area, nx=nx, ny=ny, values=values, array_id=array.label)

    @classmethod
    def local_maxima(cls, field: CrlbField) -> list[Point3]:
        """
        Centres of interior cells strictly greater than all 8 neighbours.

        Border cells are never reported. Results are ordered by y, then x.
        """
        v = field.values
        if field.nx < 3 or field.ny < 3:
            return []
        core = v[1:-1, 1:-1]
        is_max = np.ones_like(core, dtype=bool)
        for dy in (-1, 0, 1):
            for dx in (-1, 0, 1):
                if dx == 0 and dy == 0:
                    continue
                neighbour = v[1 + dy : v.shape[0] - 1 + dy, 1 + dx : v.shape[1] - 1 + dx]
                is_max &= core > neighbour
        xs, ys = field.xs, field.ys
        rows, cols = np.nonzero(is_max)
        return [
            Point3(x=float(xs[c + 1]), y=float(ys[r + 1]), z=0.0)
            for r, c in zip(rows, cols)
        ]

    @classmethod
    def spacing_sweep(
        cls, n_bar: int, height: float, k_e: float, deltas: list[float]
    ) -> SweepCurve:
        if any(delta <= 0 for delta in deltas):
            raise InvalidParameterError("all spacings must be positive")
        points = tuple(
            (
                float(delta),
                ClosedFormService.square_grid_crlb(
                    SquareGridSpec(spacing=delta, n_bar=n_bar, height=height, k_e=k_e)
                ),
            )
            for delta in deltas
        )
        return SweepCurve(points=points)

    @classmethod
    def focal_experiment(
        cls,
        model: RangeModel,
        area: ServiceArea,
        focal_x: float,
        n: int,
        n_wg: int,
        height: float,
        resolution: tuple[int, int],
        segment_length: float | None = None,
    ) -> CrlbField:
        """Heatmap of the array activated on a segment (default D_L/2) around focal_x."""
        if n % n_wg:
            raise InvalidParameterError(f"n = {n} is not a multiple of n_wg = {n_wg}")
        array = GeometryService.make_focal_segment_array(
            focal_x,
            segment_length if segment_length is not None else area.d_l / 2,
            n_wg,
            n // n_wg,
            area,
            height,
        )
        return cls.heatmap(model, array, area, resolution)

    @classmethod
    def best_cell(cls, field: CrlbField) -> Point3:
        iy, ix = np.unravel_index(int(np.argmin(field.values)), field.values.shape)
        return Point3(x=float(field.xs[ix]), y=float(field.ys[iy]), z=0.0)

    @classmethod
    def fairness_ratio(cls, field: CrlbField) -> float:
        """Largest finite over smallest cell, outside the exclusion square."""
        kept = field.values[~field.area.excluded(field.xs, field.ys)]
        finite = kept[np.isfinite(kept)]
        if finite.size == 0:
            return math.inf
        return float(finite.max() / kept.min())

    @classmethod
    def compare_sizes(
        cls,
        model: RangeModel,
        area: ServiceArea,
        sizes: list[int],
        n_wg: int,
        height: float,
        wavelength: float,
        resolution: tuple[int, int],
    ) -> list[CompareRow]:
        """Averaged CRLB of pinching and conventional arrays for each antenna count."""
        rows = []
        for n in sizes:
            if n % n_wg:
                raise InvalidParameterError(f"n = {n} is not a multiple of n_wg = {n_wg}")
            pin = GeometryService.make_waveguide_array(n_wg, n // n_wg, area, height)
            conv = GeometryService.make_circular_array(n, wavelength, height)
            pinching = cls.averaged_crlb(model, pin, area, resolution)
            conventional = cls.averaged_crlb(model, conv, area, resolution)
            rows.append(
                CompareRow(
                    n=n,
                    pinching=pinching,
                    conventional=conventional,
                    delta_crb=pinching - conventional,
                )
            )
        return rows

    @classmethod
    def conventional_singularity_trend(
        cls,
        model: RangeModel,
        area: ServiceArea,
        n: int,
        height: float,
        wavelengths: list[float],
    ) -> list[float]:
        """Conventional CRLB at (D_L/2, 0, 0) for each wavelength."""
        user = Point3(x=area.d_l / 2, y=0.0, z=0.0)
        return [
            CrlbService.crlb(
                model, user, GeometryService.make_circular_array(n, wavelength, height)
            ).value
            for wavelength in wavelengths
        ]

    @classmethod
    def edge_bound_check(
        cls, model: RangeModel, area: ServiceArea, array: AntennaArray
    ) -> tuple[float, float]:
        """CRLB at (D_L/2, 0, 0) and the smallest single-antenna upper bound there."""
        user = Point3(x=area.d_l / 2, y=0.0, z=0.0)
        return (
            CrlbService.crlb(model, user, array).value,
            CrlbService.best_upper_bound(model, user, array),
        )

    @classmethod
    def gradient_check(
        cls,
        model: RangeModel,
        array: AntennaArray,
        area: ServiceArea,
        probes: int = 20,
        step: float = GRADIENT_STEP,
        tolerance: float = GRADIENT_TOLERANCE,
    ) -> GradientCheckReport:
        """
        Compare the analytic gradient with central differences on a probe grid.

        The relative error at a probe is |g - g_fd| / (|g| + CRB / d_H); CRB / d_H
        is the gradient scale of the field. Singular probes are skipped.
        """
        xs, ys = area.cell_centers(probes, probes)
        worst, worst_point, skipped = 0.0, None, 0
        for y in ys:
            for x in xs:
                user = Point3(x=float(x), y=float(y), z=0.0)
                value = CrlbService.crlb(model, user, array)
                try:
                    analytic = np.array(CrlbService.crlb_gradient(model, user, array))
                except SingularityError:
                    skipped += 1
                    continue
                numeric = np.array(
                    [
                        (
                            CrlbService.crlb_grid(model, x + step, y, array)
                            - CrlbService.crlb_grid(model, x - step, y, array)
                        )
                        / (2 * step),
                        (
                            CrlbService.crlb_grid(model, x, y + step, array)
                            - CrlbService.crlb_grid(model, x, y - step, array)
                        )
                        / (2 * step),
                    ]
                )
                scale = np.linalg.norm(analytic) + value.value / array.height
                error = float(np.linalg.norm(analytic - numeric) / scale)
                if error > worst:
                    worst, worst_point = error, user
        log.debug("gradient check: worst relative error %.3g", worst)
        return GradientCheckReport(
            probes=probes * probes,
            skipped=skipped,
            max_relative_error=worst,
            worst_point=worst_point,
            step=step,
            tolerance=tolerance,
        )

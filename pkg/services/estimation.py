import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from core import InvalidParameterError, get_logger
from models import AntennaArray, Point3, RangeModel, RangeSample, ServiceArea
from schemas import McReport
from services.crlb import CrlbService
from utils.rng import standard_normals

log = get_logger("estimation")

REFINE_SHRINK = 0.3
REFINE_STAGES = 12
REFINE_MAX_ITERATIONS = 500
MIN_COARSE_RESOLUTION = 8
MIN_TRIALS = 100

# 3x3 stencil ordered by x then y, so argmax ties resolve to the smallest x, then y
_STENCIL = np.array([(dx, dy) for dx in (-1, 0, 1) for dy in (-1, 0, 1)], dtype=float)
_CENTER = 4


def _objective(
    k_e: float,
    xs: np.ndarray,
    ys: np.ndarray,
    positions: np.ndarray,
    estimates: np.ndarray,
    noiseless: bool,
) -> np.ndarray:
    """Log-likelihood up to its constant, or its k_e -> 0 limit for noiseless data."""
    d2 = (xs[:, None] - positions[:, 0]) ** 2 + (ys[:, None] - positions[:, 1]) ** 2
    d2 = d2 + positions[:, 2] ** 2
    residual2 = (estimates - np.sqrt(d2)) ** 2
    if noiseless:
        return -np.sum(residual2 / (2 * d2), axis=-1)
    sigma2 = k_e * d2
    return -0.5 * np.sum(np.log(sigma2), axis=-1) - np.sum(
        residual2 / (2 * sigma2), axis=-1
    )


class EstimationService:
    """
    Noisy range generation, maximum-likelihood positioning and Monte-Carlo runs.

    Methods:
        sample_ranges(model, user, array, stream, trial, noiseless) -> RangeSample:
            One set of range estimates from the trial's noise stream.

        sample_range_matrix(model, user, array, stream, trials, noiseless) -> np.ndarray:
            The same draws for many trials at once, shape (trials, N).

        mle_estimate(model, sample, array, search, coarse_resolution) -> Point3:
            Grid-then-refine maximizer of the log-likelihood.

        run_mc(model, user, array, trials, seed, search, ...) -> McReport:
            Empirical MSE of the estimator next to both CRLB variants.
    """

    @classmethod
    def sample_range_matrix(
        cls,
        model: RangeModel,
        user: Point3,
        array: AntennaArray,
        stream: int,
        trials,
        noiseless: bool = False,
    ) -> np.ndarray:
        trial_ids = np.arange(trials) if np.ndim(trials) == 0 else np.asarray(trials)
        positions = array.positions
        distances = np.sqrt(
            (user.x - positions[:, 0]) ** 2
            + (user.y - positions[:, 1]) ** 2
            + positions[:, 2] ** 2
        )
        if noiseless:
            return np.tile(distances, (len(trial_ids), 1))
        noise = standard_normals(stream, trial_ids, array.size)
        return distances + math.sqrt(model.k_e) * distances * noise

    @classmethod
    def sample_ranges(
        cls,
        model: RangeModel,
        user: Point3,
        array: AntennaArray,
        stream: int,
        trial: int = 0,
        noiseless: bool = False,
    ) -> RangeSample:
        """
        Range estimates d_hat = d + w with w ~ N(0, k_e d^2), independent per antenna.

        Args:
            model (RangeModel): Noise model.
            user (Point3): True user position.
            array (AntennaArray): Antennas.
            stream (int): Seed of the per-trial noise streams.
            trial (int): Trial index within the stream.
            noiseless (bool): Zero-noise switch; estimates equal the true distances.

        Returns:
            RangeSample: The estimates tagged with their stream.
        """
        row = cls.sample_range_matrix(model, user, array, stream, [trial], noiseless)[0]
        return RangeSample(
            estimates=tuple(float(v) for v in row),
            seed_tag=stream,
            trial=trial,
            noiseless=noiseless,
        )

    @classmethod
    def _locate(
        cls,
        k_e: float,
        estimates: np.ndarray,
        positions: np.ndarray,
        search: ServiceArea,
        coarse_resolution: int,
        noiseless: bool,
    ) -> tuple[float, float]:
        x_lo, x_hi = search.x_bounds
        y_lo, y_hi = search.y_bounds
        xs, ys = search.cell_centers(coarse_resolution, coarse_resolution)
        grid_x, grid_y = np.meshgrid(xs, ys, indexing="ij")
        values = _objective(
            k_e, grid_x.ravel(), grid_y.ravel(), positions, estimates, noiseless
        )
        best = int(np.argmax(values))
        x, y, incumbent = grid_x.ravel()[best], grid_y.ravel()[best], values[best]

        step = np.array([search.d_l, search.d_w]) / coarse_resolution
        shrinks = 0
        for _ in range(REFINE_MAX_ITERATIONS):
            cand_x = np.clip(x + _STENCIL[:, 0] * step[0], x_lo, x_hi)
            cand_y = np.clip(y + _STENCIL[:, 1] * step[1], y_lo, y_hi)
            values = _objective(k_e, cand_x, cand_y, positions, estimates, noiseless)
            values[_CENTER] = incumbent
            best = int(np.argmax(values))
            if values[best] > incumbent:
                x, y, incumbent = cand_x[best], cand_y[best], values[best]
                continue
            step = step * REFINE_SHRINK
            shrinks += 1
            if shrinks == REFINE_STAGES:
                break
        else:
            log.debug("refinement hit the iteration cap at (%g, %g)", x, y)
        return float(x), float(y)

    @classmethod
    def mle_estimate(
        cls,
        model: RangeModel,
        sample: RangeSample,
        array: AntennaArray,
        search: ServiceArea,
        coarse_resolution: int = 40,
    ) -> Point3:
        """
        Maximum-likelihood position over the search area.

        A coarse_resolution x coarse_resolution grid of cell centres picks the
        starting point; a 3x3 stencil then moves to strictly better points and
        shrinks by 0.3 whenever the centre wins, for 12 shrink stages.

        Raises:
            InvalidParameterError: If coarse_resolution < 8 or the sample does not
                match the array.
        """
        if coarse_resolution < MIN_COARSE_RESOLUTION:
            raise InvalidParameterError(
                f"coarse_resolution must be at least {MIN_COARSE_RESOLUTION}"
            )
        if len(sample.estimates) != array.size:
            raise InvalidParameterError(
                f"{len(sample.estimates)} estimates given for {array.size} antennas"
            )
        x, y = cls._locate(
            model.k_e,
            np.asarray(sample.estimates),
            array.positions,
            search,
            coarse_resolution,
            sample.noiseless,
        )
        return Point3(x=x, y=y, z=0.0)

    @classmethod
    def run_mc(
        cls,
        model: RangeModel,
        user: Point3,
        array: AntennaArray,
        trials: int,
        seed: int,
        search: ServiceArea,
        coarse_resolution: int = 40,
        workers: int = 1,
        noiseless: bool = False,
    ) -> McReport:
        """
        Monte-Carlo validation of the CRLB.

        Trials are independent and may run on `workers` threads; per-trial errors
        are stored by trial index and reduced in that order, so the report is
        identical for any worker count.

        Raises:
            InvalidParameterError: If trials < 100.
        """
        if trials < MIN_TRIALS:
            raise InvalidParameterError(f"trials must be at least {MIN_TRIALS}")
        if coarse_resolution < MIN_COARSE_RESOLUTION:
            raise InvalidParameterError(
                f"coarse_resolution must be at least {MIN_COARSE_RESOLUTION}"
            )
        if workers < 1:
            raise InvalidParameterError("workers must be at least 1")
        estimates = cls.sample_range_matrix(model, user, array, seed, trials, noiseless)
        positions = array.positions
        located = np.empty((trials, 2))

        def solve(chunk: range) -> None:
            for t in chunk:
                located[t] = cls._locate(
                    model.k_e, estimates[t], positions, search, coarse_resolution, noiseless
                )

        chunks = [range(k, trials, workers) for k in range(workers)]
        log.debug("monte carlo: %d trials on %d worker(s)", trials, workers)
        if workers == 1:
            solve(chunks[0])
        else:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                list(pool.map(solve, chunks))

        squared = (located[:, 0] - user.x) ** 2 + (located[:, 1] - user.y) ** 2
        mse = float(np.sum(squared) / trials)
        crlb_paper = CrlbService.crlb(model, user, array).value
        crlb_full = CrlbService.crlb_full(model, user, array).value
        mean = located.sum(axis=0) / trials
        return McReport(
            trials=trials,
            mse=mse,
            crlb_paper=crlb_paper,
            crlb_full=crlb_full,
            ratio_paper=mse / crlb_paper,
            mean_estimate=Point3(x=float(mean[0]), y=float(mean[1]), z=0.0),
            max_error=float(np.sqrt(squared.max())),
            user=user,
            seed=seed,
            k_e=model.k_e,
            antenna_count=array.size,
        )

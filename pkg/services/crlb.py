import math

import numpy as np

from core import InvalidParameterError, SingularityError, get_logger
from models import AntennaArray, CrlbValue, FisherInfo, Point3, RangeModel
from services.geometry import GeometryService

log = get_logger("crlb")


def _offsets(xs, ys, positions: np.ndarray):
    """User-minus-antenna offsets and squared distances, antennas on the last axis."""
    x_t = np.asarray(xs, dtype=float)[..., None] - positions[:, 0]
    y_t = np.asarray(ys, dtype=float)[..., None] - positions[:, 1]
    d2 = x_t**2 + y_t**2 + positions[:, 2] ** 2
    return x_t, y_t, d2


def _inverse(total):
    with np.errstate(divide="ignore"):
        return np.where(total > 0, 1.0 / np.where(total > 0, total, 1.0), np.inf)


class CrlbService:
    """
    Range-noise model, likelihood, Fisher information and the CRLB.

    All methods are pure functions of their arguments. Point-wise methods take
    `Point3` users; `crlb_grid` evaluates whole grids at once.
    """

    @classmethod
    def noise_variance(cls, model: RangeModel, user: Point3, antenna: Point3) -> float:
        """
        Range-noise variance K_E * d^2 for one user-antenna pair.

        Raises:
            GeometryError: If the antenna is not above the ground.
        """
        return model.k_e * GeometryService.distance(user, antenna) ** 2

    @classmethod
    def log_likelihood(
        cls,
        model: RangeModel,
        user_hypothesis: Point3,
        array: AntennaArray,
        estimates,
    ):
        """
        Gaussian log-likelihood of range estimates at a hypothesized position.

        Args:
            model (RangeModel): Noise model.
            user_hypothesis (Point3): Position at which d_mn and sigma_mn are evaluated.
            array (AntennaArray): Antennas, in the order of the estimates.
            estimates: One estimate per antenna, or a batch of shape (..., N).

        Returns:
            float for a single estimate vector, otherwise an array of shape (...).
        """
        values = np.asarray(estimates, dtype=float)
        if values.shape[-1] != array.size:
            raise InvalidParameterError(
                f"{values.shape[-1]} estimates given for {array.size} antennas"
            )
        _, _, d2 = _offsets(user_hypothesis.x, user_hypothesis.y, array.positions)
        sigma2 = model.k_e * d2
        residual = values - np.sqrt(d2)
        result = (
            -0.5 * array.size * math.log(2 * math.pi)
            - 0.5 * np.sum(np.log(sigma2))
            - np.sum(residual**2 / (2 * sigma2), axis=-1)
        )
        return float(result) if np.ndim(result) == 0 else result

    @classmethod
    def fisher_info(cls, model: RangeModel, user: Point3, array: AntennaArray) -> FisherInfo:
        x_t, y_t, d2 = _offsets(user.x, user.y, array.positions)
        weight = (2 * model.k_e + 1) / (model.k_e * d2) / d2
        return FisherInfo(
            j_x=float(np.sum(weight * x_t**2)),
            j_y=float(np.sum(weight * y_t**2)),
            j_xy=float(np.sum(weight * x_t * y_t)),
        )

    @classmethod
    def crlb_grid(cls, model: RangeModel, xs, ys, array: AntennaArray) -> np.ndarray:
        """
        CRLB at every (x, y) pair of broadcast-compatible coordinate arrays.

        Non-finite points (a vanishing Fisher term) come back as inf.
        """
        x_t, y_t, d2 = _offsets(xs, ys, array.positions)
        d4 = d2**2
        s_x = np.sum(x_t**2 / d4, axis=-1)
        s_y = np.sum(y_t**2 / d4, axis=-1)
        return model.prefactor * (_inverse(s_x) + _inverse(s_y))

    @classmethod
    def crlb(cls, model: RangeModel, user: Point3, array: AntennaArray) -> CrlbValue:
        return CrlbValue.of(cls.crlb_grid(model, user.x, user.y, array))

    @classmethod
    def crlb_full(cls, model: RangeModel, user: Point3, array: AntennaArray) -> CrlbValue:
        """Trace of the inverse full 2x2 Fisher matrix (cross term included)."""
        return CrlbValue.of(cls.fisher_info(model, user, array).full_bound())

    @classmethod
    def crlb_gradient(
        cls, model: RangeModel, user: Point3, array: AntennaArray
    ) -> tuple[float, float]:
        """
        Exact gradient of the CRLB with respect to the user's (x, y).

        Raises:
            SingularityError: Where either diagonal sum vanishes.
        """
        x_t, y_t, d2 = _offsets(user.x, user.y, array.positions)
        d4, d6 = d2**2, d2**3
        gamma_1 = np.sum(x_t**2 / d4)
        gamma_4 = np.sum(y_t**2 / d4)
        if gamma_1 == 0 or gamma_4 == 0:
            raise SingularityError(
                f"CRLB gradient undefined at ({user.x:g}, {user.y:g}): zero Fisher term"
            )
        gamma_2 = np.sum(2 * x_t / d4)
        gamma_3 = np.sum(4 * x_t**3 / d6)
        gamma_5 = np.sum(4 * x_t * y_t**2 / d6)
        d_x = -(gamma_2 - gamma_3) / gamma_1**2 + gamma_5 / gamma_4**2
        # y-component: same expression with the roles of x and y swapped
        eta_2 = np.sum(2 * y_t / d4)
        eta_3 = np.sum(4 * y_t**3 / d6)
        eta_5 = np.sum(4 * y_t * x_t**2 / d6)
        d_y = -(eta_2 - eta_3) / gamma_4**2 + eta_5 / gamma_1**2
        return (float(model.prefactor * d_x), float(model.prefactor * d_y))

    @classmethod
    def crlb_upper_bound(
        cls, model: RangeModel, user: Point3, array: AntennaArray, antenna_index: int
    ) -> float:
        """
        Single-antenna upper bound on the CRLB.

        Raises:
            SingularityError: If the chosen antenna shares the user's x or y.
        """
        if not 0 <= antenna_index < array.size:
            raise InvalidParameterError(
                f"antenna_index {antenna_index} out of range for {array.size} antennas"
            )
        antenna = array.antennas[antenna_index]
        x_t, y_t = user.x - antenna.x, user.y - antenna.y
        if x_t == 0 or y_t == 0:
            raise SingularityError(
                f"antenna {antenna_index} is aligned with the user; the bound is not finite"
            )
        d4 = (x_t**2 + y_t**2 + antenna.z**2) ** 2
        return model.prefactor * (d4 / x_t**2 + d4 / y_t**2)

    @classmethod
    def best_upper_bound(cls, model: RangeModel, user: Point3, array: AntennaArray) -> float:
        """Smallest finite single-antenna bound over the array (inf if none exists)."""
        bounds = []
        for index in range(array.size):
            try:
                bounds.append(cls.crlb_upper_bound(model, user, array, index))
            except SingularityError:
                log.debug("antenna %d skipped for the upper bound", index)
        return min(bounds, default=math.inf)

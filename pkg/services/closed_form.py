import math

import numpy as np

from core import ConvergenceError, InvalidParameterError, get_logger
from models import SquareGridSpec

log = get_logger("closed_form")

GOLDEN_RATIO = (1 + math.sqrt(5)) / 2
MAX_GOLDEN_ITERATIONS = 200


def _square_grid_shape(spacing: float, n_bar: int, height: float) -> float:
    """Delta^2 / 4 * (1/S + 1/S'), the k_e-free part of the square-grid CRLB."""
    half = np.arange(1, n_bar + 1) - 0.5
    n, i = np.meshgrid(half, half, indexing="ij")
    beta = n**2 + i**2 + height**2 / spacing**2
    s = np.sum(n**2 / beta**2)
    s_prime = np.sum(i**2 / beta**2)
    return spacing**2 / 4 * (1 / s + 1 / s_prime)


class ClosedFormService:
    """
    Closed forms for users at the centre of a square antenna cluster.

    Methods:
        square_grid_crlb(spec) -> float
        crlb_n4(spacing, height, k_e) -> float
        crlb_n4_derivatives(spacing, height, k_e) -> (float, float)
        optimal_spacing_analytic(height) -> float
        optimize_spacing_numeric(n_bar, height, k_e, bracket, tol) -> float
    """

    @classmethod
    def square_grid_crlb(cls, spec: SquareGridSpec) -> float:
        prefactor = spec.k_e / (2 * spec.k_e + 1)
        return prefactor * _square_grid_shape(spec.spacing, spec.n_bar, spec.height)

    @classmethod
    def crlb_n4(cls, spacing: float, height: float, k_e: float) -> float:
        if spacing <= 0:
            raise InvalidParameterError("spacing must be positive")
        return (
            2 * k_e * spacing**2 / (2 * k_e + 1) * (0.5 + height**2 / spacing**2) ** 2
        )

    @classmethod
    def crlb_n4_derivatives(
        cls, spacing: float, height: float, k_e: float
    ) -> tuple[float, float]:
        """First and second derivatives of `crlb_n4` in the spacing."""
        if spacing <= 0:
            raise InvalidParameterError("spacing must be positive")
        scale = 4 * k_e / (2 * k_e + 1)
        first = scale * (spacing / 2 + height**2 / spacing) * (
            0.5 - height**2 / spacing**2
        )
        second = scale * (0.25 + 3 * height**4 / spacing**4)
        return first, second

    @classmethod
    def optimal_spacing_analytic(cls, height: float) -> float:
        if height <= 0:
            raise InvalidParameterError("height must be positive")
        return math.sqrt(2) * height

    @classmethod
    def default_bracket(cls, height: float) -> tuple[float, float]:
        return (0.1 * height, 20 * height)

    @classmethod
    def optimize_spacing_numeric(
        cls,
        n_bar: int,
        height: float,
        k_e: float,
        bracket: tuple[float, float] | None = None,
        tol: float = 1e-6,
    ) -> float:
        """
        Golden-section search for the spacing that minimizes `square_grid_crlb`.

        The search runs on the k_e-free shape of the objective; k_e only scales
        it by a positive constant, so the minimizer does not depend on it.

        Args:
            n_bar (int): Antennas per quadrant side.
            height (float): Waveguide height d_H.
            k_e (float): Noise coefficient, validated but irrelevant to the argmin.
            bracket (tuple[float, float] | None): Search interval, defaults to
                (0.1 d_H, 20 d_H).
            tol (float): Final interval width.

        Returns:
            float: The minimizing spacing.

        Raises:
            InvalidParameterError: For an invalid bracket or tolerance.
            ConvergenceError: If 200 iterations do not reach `tol`.
        """
        SquareGridSpec(spacing=1.0, n_bar=n_bar, height=height, k_e=k_e)
        lower, upper = bracket if bracket is not None else cls.default_bracket(height)
        if lower <= 0 or lower >= upper:
            raise InvalidParameterError(
                f"invalid bracket ({lower:g}, {upper:g}): need 0 < lower < upper"
            )
        if tol <= 0:
            raise InvalidParameterError("tol must be positive")

        def objective(spacing: float) -> float:
            return _square_grid_shape(spacing, n_bar, height)

        a, b = lower, upper
        c = b - (b - a) / GOLDEN_RATIO
        d = a + (b - a) / GOLDEN_RATIO
        f_c, f_d = objective(c), objective(d)
        for iteration in range(MAX_GOLDEN_ITERATIONS):
            if b - a <= tol:
                log.debug("golden section converged after %d iterations", iteration)
                return (a + b) / 2
            if f_c < f_d:
                b, d, f_d = d, c, f_c
                c = b - (b - a) / GOLDEN_RATIO
                f_c = objective(c)
            else:
                a, c, f_c = c, d, f_d
                d = a + (b - a) / GOLDEN_RATIO
                f_d = objective(d)
        raise ConvergenceError(
            f"golden section did not reach tol {tol:g} within "
            f"{MAX_GOLDEN_ITERATIONS} iterations (width {b - a:g})"
        )

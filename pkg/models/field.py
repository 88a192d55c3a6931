import math

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from models.crlb import CrlbValue
from models.geometry import ServiceArea


class CrlbField(BaseModel):
    """
    CRLB values at the cell centres of a uniform grid over a service area.

    `values` is row-major with shape (ny, nx): row j holds the cells at the j-th
    y centre. Non-finite cells are stored as inf.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)
    area: ServiceArea
    nx: int = Field(ge=1)
    ny: int = Field(ge=1)
    values: np.ndarray
    array_id: str = "array"

    @field_validator("values", mode="before")
    @classmethod
    def as_float_grid(cls, values):
        return np.asarray(values, dtype=float)

    @model_validator(mode="after")
    def check_shape(self):
        if self.values.shape != (self.ny, self.nx):
            raise ValueError(
                f"values shape {self.values.shape} does not match (ny, nx) = "
                f"({self.ny}, {self.nx})"
            )
        return self

    @property
    def xs(self) -> np.ndarray:
        return self.area.cell_centers(self.nx, self.ny)[0]

    @property
    def ys(self) -> np.ndarray:
        return self.area.cell_centers(self.nx, self.ny)[1]

    def cell(self, ix: int, iy: int) -> CrlbValue:
        return CrlbValue.of(self.values[iy, ix])


class SweepCurve(BaseModel):
    """CRLB against antenna spacing, spacing strictly increasing."""

    model_config = ConfigDict(frozen=True)
    points: tuple[tuple[float, float], ...] = Field(min_length=1)

    @model_validator(mode="after")
    def check_increasing(self):
        deltas = [delta for delta, _ in self.points]
        if any(b <= a for a, b in zip(deltas, deltas[1:])):
            raise ValueError("spacings must be strictly increasing")
        return self

    @property
    def deltas(self) -> np.ndarray:
        return np.array([delta for delta, _ in self.points])

    @property
    def values(self) -> np.ndarray:
        return np.array([crb for _, crb in self.points])

    @property
    def argmin(self) -> int:
        return int(np.argmin(self.values))

    @property
    def best_spacing(self) -> float:
        return float(self.deltas[self.argmin])

    def is_unimodal(self) -> bool:
        """Strictly decreasing up to the minimum and strictly increasing after."""
        steps = np.diff(self.values)
        k = self.argmin
        return bool(np.all(steps[:k] < 0) and np.all(steps[k:] > 0)) and math.isfinite(
            float(self.values[k])
        )

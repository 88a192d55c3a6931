from typing import Annotated, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

Meters = Annotated[float, Field(allow_inf_nan=False)]
PositiveMeters = Annotated[float, Field(gt=0, allow_inf_nan=False)]


class Point3(BaseModel):
    """A position in meters; users sit at z = 0, antennas at the waveguide height."""

    model_config = ConfigDict(frozen=True)
    x: Meters
    y: Meters
    z: Meters = 0.0

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.x, self.y, self.z)


class ServiceArea(BaseModel):
    """
    The D_L x D_W ground rectangle centred at the origin.

    The long side D_L runs along x. `exclusion_side` is the side of the square
    around the origin that area averages skip (0 means nothing is skipped).
    """

    model_config = ConfigDict(frozen=True)
    d_w: PositiveMeters
    d_l: PositiveMeters
    exclusion_side: Annotated[float, Field(ge=0, allow_inf_nan=False)] = 0.0

    @model_validator(mode="after")
    def check_exclusion(self):
        if self.exclusion_side >= min(self.d_w, self.d_l):
            raise ValueError(
                f"exclusion_side {self.exclusion_side} must be smaller than "
                f"min(d_w, d_l) = {min(self.d_w, self.d_l)}"
            )
        return self

    @property
    def x_bounds(self) -> tuple[float, float]:
        return (-self.d_l / 2, self.d_l / 2)

    @property
    def y_bounds(self) -> tuple[float, float]:
        return (-self.d_w / 2, self.d_w / 2)

    def contains(self, x: float, y: float) -> bool:
        return abs(x) <= self.d_l / 2 and abs(y) <= self.d_w / 2

    def cell_centers(self, nx: int, ny: int) -> tuple[np.ndarray, np.ndarray]:
        """
        Midpoints of a uniform nx x ny partition.

        Centres are written as ((2i + 1 - n) / 2n) * length so that the grid is
        exactly antisymmetric about the origin.
        """
        xs = (2 * np.arange(nx) + 1 - nx) / (2 * nx) * self.d_l
        ys = (2 * np.arange(ny) + 1 - ny) / (2 * ny) * self.d_w
        return xs, ys

    def excluded(self, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        """Mask (ny, nx) of cell centres strictly inside the exclusion square."""
        half = self.exclusion_side / 2
        return (np.abs(ys)[:, None] < half) & (np.abs(xs)[None, :] < half)


class AntennaArray(BaseModel):
    """
    Ordered antenna positions at a common height.

    `waveguide_index` tags each pinching antenna with its waveguide; it is None
    for conventional arrays.
    """

    model_config = ConfigDict(frozen=True)
    antennas: tuple[Point3, ...] = Field(min_length=1)
    height: PositiveMeters
    waveguide_index: Optional[tuple[int, ...]] = None
    label: str = "array"

    @model_validator(mode="after")
    def check_layout(self):
        if any(antenna.z != self.height for antenna in self.antennas):
            raise ValueError(f"all antennas must sit at z = height = {self.height}")
        if len({antenna.as_tuple() for antenna in self.antennas}) != len(self.antennas):
            raise ValueError("antenna positions must be pairwise distinct")
        if self.waveguide_index is not None and len(self.waveguide_index) != len(
            self.antennas
        ):
            raise ValueError("waveguide_index needs one tag per antenna")
        return self

    @property
    def size(self) -> int:
        return len(self.antennas)

    @property
    def positions(self) -> np.ndarray:
        """Antenna coordinates as an (N, 3) array."""
        return np.array([antenna.as_tuple() for antenna in self.antennas], dtype=float)

import math
from typing import Annotated

from pydantic import BaseModel, ConfigDict, Field, model_validator

PositiveFinite = Annotated[float, Field(gt=0, allow_inf_nan=False)]


class RangeModel(BaseModel):
    """Distance-dependent range noise: sigma^2 = k_e * d^2."""

    model_config = ConfigDict(frozen=True)
    k_e: PositiveFinite

    @property
    def prefactor(self) -> float:
        """K_E / (2 K_E + 1), the constant in front of every CRLB expression."""
        return self.k_e / (2 * self.k_e + 1)


class FisherInfo(BaseModel):
    """
    Fisher information for the user's (x, y).

    `j_x` and `j_y` are the diagonal terms used by the CRLB; `j_xy` is the cross
    term, kept as a diagnostic for the full-matrix bound.
    """

    model_config = ConfigDict(frozen=True)
    j_x: Annotated[float, Field(ge=0)]
    j_y: Annotated[float, Field(ge=0)]
    j_xy: float = 0.0

    @property
    def determinant(self) -> float:
        return self.j_x * self.j_y - self.j_xy**2

    def diagonal_bound(self) -> float:
        if self.j_x == 0 or self.j_y == 0:
            return math.inf
        return 1 / self.j_x + 1 / self.j_y

    def full_bound(self) -> float:
        """Trace of the inverse 2x2 matrix; inf when it is singular."""
        det = self.determinant
        if det <= 0:
            return math.inf
        return (self.j_x + self.j_y) / det


class CrlbValue(BaseModel):
    """A CRLB in m^2; `finite` is False when a diagonal Fisher term vanishes."""

    model_config = ConfigDict(frozen=True)
    value: Annotated[float, Field(gt=0)]
    finite: bool

    @model_validator(mode="after")
    def check_state(self):
        if self.finite != math.isfinite(self.value):
            raise ValueError("finite flag disagrees with value")
        return self

    @classmethod
    def of(cls, value: float) -> "CrlbValue":
        value = float(value)
        return cls(value=value, finite=math.isfinite(value))


class SquareGridSpec(BaseModel):
    """A (2 n_bar) x (2 n_bar) square cluster centred on the user."""

    model_config = ConfigDict(frozen=True)
    spacing: PositiveFinite
    n_bar: Annotated[int, Field(ge=1)]
    height: PositiveFinite
    k_e: PositiveFinite

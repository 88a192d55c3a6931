import math
from typing import Annotated, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, model_validator

from models import ServiceArea

PositiveFloat = Annotated[float, Field(gt=0, allow_inf_nan=False)]
FiniteFloat = Annotated[float, Field(allow_inf_nan=False)]


class StrictSchema(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class AreaSchemaIn(StrictSchema):
    d_w: PositiveFloat = 10.0
    d_l: PositiveFloat = 40.0
    exclusion_side: Annotated[float, Field(ge=0, allow_inf_nan=False)] = 1.0

    @model_validator(mode="after")
    def check_exclusion(self):
        if self.exclusion_side >= min(self.d_w, self.d_l):
            raise ValueError(
                f"exclusion_side {self.exclusion_side} exceeds min(d_w, d_l) = "
                f"{min(self.d_w, self.d_l)}"
            )
        return self

    def to_area(self) -> ServiceArea:
        return ServiceArea(
            d_w=self.d_w, d_l=self.d_l, exclusion_side=self.exclusion_side
        )


class WaveguideArraySchemaIn(StrictSchema):
    kind: Literal["waveguide"] = "waveguide"
    n: Annotated[int, Field(ge=1)] = 20
    n_wg: Annotated[int, Field(ge=1)] = 2

    @model_validator(mode="after")
    def check_split(self):
        if self.n % self.n_wg:
            raise ValueError(f"n = {self.n} is not a multiple of n_wg = {self.n_wg}")
        return self


class CircularArraySchemaIn(StrictSchema):
    kind: Literal["circular"]
    n: Annotated[int, Field(ge=2)] = 20
    wavelength: PositiveFloat = 0.01


class SquareClusterSchemaIn(StrictSchema):
    kind: Literal["square-cluster"]
    n_bar: Annotated[int, Field(ge=1)] = 1
    spacing: Optional[PositiveFloat] = Field(
        None, description="Defaults to the analytic optimum sqrt(2) * d_h"
    )
    center_x: FiniteFloat = 0.0
    center_y: FiniteFloat = 0.0


class FocalSegmentSchemaIn(StrictSchema):
    kind: Literal["focal-segment"]
    n: Annotated[int, Field(ge=1)] = 20
    n_wg: Annotated[int, Field(ge=1)] = 2
    focal_x: FiniteFloat = -10.0
    segment_length: Optional[PositiveFloat] = Field(
        None, description="Defaults to half the area length"
    )

    @model_validator(mode="after")
    def check_split(self):
        if self.n % self.n_wg:
            raise ValueError(f"n = {self.n} is not a multiple of n_wg = {self.n_wg}")
        return self


ArraySchemaIn = Annotated[
    Union[
        WaveguideArraySchemaIn,
        CircularArraySchemaIn,
        SquareClusterSchemaIn,
        FocalSegmentSchemaIn,
    ],
    Field(discriminator="kind"),
]


class ResolutionSchemaIn(StrictSchema):
    nx: Annotated[int, Field(ge=8)] = 200
    ny: Annotated[int, Field(ge=8)] = 50

    @classmethod
    def parse(cls, text: str) -> "ResolutionSchemaIn":
        """Build from the `<nx>x<ny>` command-line form."""
        nx, sep, ny = text.lower().partition("x")
        if not sep:
            raise ValueError(f"resolution '{text}' is not of the form <nx>x<ny>")
        return cls(nx=int(nx), ny=int(ny))


class UserSchemaIn(StrictSchema):
    x: FiniteFloat = 5.0
    y: FiniteFloat = 1.0


class SweepSchemaIn(StrictSchema):
    delta_min: PositiveFloat = 0.5
    delta_max: PositiveFloat = 10.0
    delta_step: PositiveFloat = 0.1

    @model_validator(mode="after")
    def check_range(self):
        if self.delta_max <= self.delta_min:
            raise ValueError("delta_max must exceed delta_min")
        return self

    def deltas(self) -> list[float]:
        count = int(math.floor((self.delta_max - self.delta_min) / self.delta_step + 1e-9))
        return [round(self.delta_min + k * self.delta_step, 12) for k in range(count + 1)]


class OptimizerSchemaIn(StrictSchema):
    tol: PositiveFloat = 1e-6
    bracket: Optional[tuple[PositiveFloat, PositiveFloat]] = Field(
        None, description="Defaults to (0.1 * d_h, 20 * d_h)"
    )

    @model_validator(mode="after")
    def check_bracket(self):
        if self.bracket is not None and self.bracket[0] >= self.bracket[1]:
            raise ValueError("bracket lower end must be below the upper end")
        return self


class CompareSchemaIn(StrictSchema):
    sizes: tuple[Annotated[int, Field(ge=2)], ...] = (4, 8, 12, 16, 20)
    wavelength: PositiveFloat = 0.01


class ExperimentConfig(StrictSchema):
    """
    Fully resolved experiment configuration.

    Every default is the numerical-study setup (K_E = 0.01, D_W = 10 m,
    D_L = 40 m, d_H = 3 m, N = 20 on N_WG = 2 waveguides) or a documented
    design decision.
    """

    area: AreaSchemaIn = AreaSchemaIn()
    k_e: PositiveFloat = 0.01
    d_h: PositiveFloat = 3.0
    array: ArraySchemaIn = WaveguideArraySchemaIn()
    resolution: ResolutionSchemaIn = ResolutionSchemaIn()
    seed: Annotated[int, Field(ge=0)] = 1
    trials: Annotated[int, Field(ge=100)] = 2000
    output_dir: Optional[str] = None
    user: UserSchemaIn = UserSchemaIn()
    coarse_resolution: Annotated[int, Field(ge=8)] = 40
    workers: Annotated[int, Field(ge=1)] = 1
    sweep: SweepSchemaIn = SweepSchemaIn()
    optimizer: OptimizerSchemaIn = OptimizerSchemaIn()
    compare: CompareSchemaIn = CompareSchemaIn()
    probes: Annotated[int, Field(ge=2)] = 20

    @model_validator(mode="after")
    def check_user_inside(self):
        if abs(self.user.x) > self.area.d_l / 2 or abs(self.user.y) > self.area.d_w / 2:
            raise ValueError(
                f"user ({self.user.x}, {self.user.y}) lies outside the service area"
            )
        return self

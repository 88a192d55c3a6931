import math
from typing import Annotated, Any, Optional

from pydantic import BaseModel, ConfigDict, PlainSerializer

from models import Point3


def format_number(value: float) -> float | str:
    """9 significant digits; non-finite values become the token `inf`."""
    if not math.isfinite(value):
        return "inf"
    return float(f"{value:.9g}")


ReportFloat = Annotated[float, PlainSerializer(format_number, when_used="json")]
ReportPoint = Annotated[
    Point3,
    PlainSerializer(
        lambda p: {"x": format_number(p.x), "y": format_number(p.y), "z": format_number(p.z)},
        when_used="json",
    ),
]


class McReport(BaseModel):
    """
    Outcome of a Monte-Carlo run of the maximum-likelihood estimator.

    `crlb_paper` is the diagonal-term bound, `crlb_full` the trace of the
    inverse full Fisher matrix; `ratio_paper` = mse / crlb_paper.
    """

    model_config = ConfigDict(frozen=True)
    trials: int
    mse: ReportFloat
    crlb_paper: ReportFloat
    crlb_full: ReportFloat
    ratio_paper: ReportFloat
    mean_estimate: ReportPoint
    max_error: ReportFloat
    user: ReportPoint
    seed: int
    k_e: ReportFloat
    antenna_count: int


class CompareRow(BaseModel):
    model_config = ConfigDict(frozen=True)
    n: int
    pinching: ReportFloat
    conventional: ReportFloat
    delta_crb: ReportFloat


class GradientCheckReport(BaseModel):
    model_config = ConfigDict(frozen=True)
    probes: int
    skipped: int
    max_relative_error: ReportFloat
    worst_point: Optional[ReportPoint]
    step: ReportFloat
    tolerance: ReportFloat

    @property
    def passed(self) -> bool:
        return self.max_relative_error < self.tolerance


class SpacingReport(BaseModel):
    model_config = ConfigDict(frozen=True)
    n_bar: int
    height: ReportFloat
    k_e: ReportFloat
    analytic: ReportFloat
    numeric: ReportFloat
    crlb_at_numeric: ReportFloat
    bracket: tuple[ReportFloat, ReportFloat]
    tol: ReportFloat


def report_document(config: dict[str, Any], body: BaseModel) -> dict[str, Any]:
    """Report layout: resolved config first, then the result."""
    return {"config": config, "result": body.model_dump(mode="json")}

from .config import (
    ExperimentConfig,
    AreaSchemaIn,
    ArraySchemaIn,
    WaveguideArraySchemaIn,
    CircularArraySchemaIn,
    SquareClusterSchemaIn,
    FocalSegmentSchemaIn,
    ResolutionSchemaIn,
    UserSchemaIn,
    SweepSchemaIn,
    OptimizerSchemaIn,
    CompareSchemaIn,
)
from .report import (
    McReport,
    CompareRow,
    GradientCheckReport,
    SpacingReport,
    format_number,
    report_document,
)

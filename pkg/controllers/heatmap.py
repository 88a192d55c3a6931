import click

from controllers.common import RunContext, build_array, experiment_options, with_run_context
from core import get_logger
from services import ExperimentService, GeometryService
from utils import format_cell, save_field_csv, save_heatmap_svg, save_summary

log = get_logger("cli.heatmap")


@click.command("heatmap")
@experiment_options
@with_run_context
def heatmap(run: RunContext):
    """
    CRLB field of the configured array over the service area.

    Writes `field.csv` (one row per cell centre), `field.svg` and `summary.txt`
    with the area average, the best cell, the fairness ratio and the local
    maxima of the field. Focal placements use an array of kind `focal-segment`.
    """
    area = run.area
    array = build_array(run.config, area)
    field = ExperimentService.heatmap(run.model, array, area, run.resolution)
    save_field_csv(run.output("field.csv"), run.config, field)
    save_heatmap_svg(run.output("field.svg"), run.config, field, array)

    average = ExperimentService.averaged_crlb(run.model, array, area, run.resolution)
    best = ExperimentService.best_cell(field)
    maxima = ExperimentService.local_maxima(field)
    lines = [
        f"array: {array.label} ({array.size} antennas, height {format_cell(array.height)} m)",
        f"grid: {field.nx}x{field.ny}",
        f"averaged crlb: {format_cell(average)} m^2",
        f"best cell: ({format_cell(best.x)}, {format_cell(best.y)})",
        f"fairness ratio: {format_cell(ExperimentService.fairness_ratio(field))}",
        f"local maxima: {len(maxima)}",
    ]
    lines += [f"  ({format_cell(p.x)}, {format_cell(p.y)})" for p in maxima]
    if array.waveguide_index is not None:
        interior = GeometryService.interior_antennas(array, area)
        lines.append(f"interior antennas: {len(interior)}")
    save_summary(run.output("summary.txt"), run.config, lines)
    log.info("heatmap of %s: average %s", array.label, format_cell(average))
    run.echo(lines[:6])

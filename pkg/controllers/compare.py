import click

from controllers.common import RunContext, experiment_options, waveguide_count, with_run_context
from core import get_logger
from services import ExperimentService
from utils import format_cell, save_compare_csv, save_summary

log = get_logger("cli.compare")


@click.command("compare")
@experiment_options
@with_run_context
def compare(run: RunContext):
    """
    Averaged CRLB of pinching against conventional arrays for each antenna count.

    Writes `compare.csv` with the columns n, pinching, conventional and
    delta_crb, plus `summary.txt`.
    """
    config = run.config
    n_wg = waveguide_count(config)
    rows = ExperimentService.compare_sizes(
        run.model,
        run.area,
        list(config.compare.sizes),
        n_wg,
        config.d_h,
        config.compare.wavelength,
        run.resolution,
    )
    save_compare_csv(run.output("compare.csv"), config, rows)
    lines = [
        f"n={row.n}: pinching {format_cell(row.pinching)}, conventional "
        f"{format_cell(row.conventional)}, delta {format_cell(row.delta_crb)}"
        for row in rows
    ]
    dominated = sum(row.pinching < row.conventional for row in rows)
    lines.append(f"pinching below conventional for {dominated} of {len(rows)} sizes")
    save_summary(run.output("summary.txt"), config, lines)
    log.info("compared %d sizes", len(rows))
    run.echo(lines)

from typing import Optional

import click

from controllers.common import RunContext, experiment_options, quadrant_size, with_run_context
from core import get_logger
from models import SquareGridSpec
from schemas import SpacingReport, report_document
from services import ClosedFormService, ExperimentService
from utils import (
    config_document,
    format_cell,
    save_curve_csv,
    save_report_json,
    save_summary,
)

log = get_logger("cli.spacing")

n_bar_option = click.option(
    "--n-bar",
    type=click.IntRange(min=1),
    default=None,
    help="Antennas per quadrant side (default: the configured square cluster, else 1).",
)


@click.command("sweep-spacing")
@experiment_options
@n_bar_option
@with_run_context
def sweep_spacing(run: RunContext, n_bar: Optional[int]):
    """
    CRLB of the square-grid cluster against the antenna spacing.

    Writes `curve.csv` (delta, crb) and `summary.txt`, which records the sampled
    argmin next to the analytic optimum sqrt(2) * d_H.
    """
    config = run.config
    n_bar = quadrant_size(config, n_bar)
    curve = ExperimentService.spacing_sweep(n_bar, config.d_h, config.k_e, config.sweep.deltas())
    save_curve_csv(run.output("curve.csv"), config, curve)
    analytic = ClosedFormService.optimal_spacing_analytic(config.d_h)
    lines = [
        f"n_bar: {n_bar}",
        f"analytic optimum (N=4): {format_cell(analytic)} m",
        f"sampled argmin: {format_cell(curve.best_spacing)} m, "
        f"crb {format_cell(float(curve.values[curve.argmin]))} m^2",
        f"unimodal: {'yes' if curve.is_unimodal() else 'no'}",
    ]
    save_summary(run.output("summary.txt"), config, lines)
    log.info("swept %d spacings", len(curve.points))
    run.echo(lines)


@click.command("optimize-spacing")
@experiment_options
@n_bar_option
@with_run_context
def optimize_spacing(run: RunContext, n_bar: Optional[int]):
    """
    Golden-section search for the spacing minimizing the square-grid CRLB.

    Writes `report.json` and `summary.txt`; prints the numeric optimum next to
    the analytic one.
    """
    config = run.config
    n_bar = quadrant_size(config, n_bar)
    bracket = config.optimizer.bracket or ClosedFormService.default_bracket(config.d_h)
    numeric = ClosedFormService.optimize_spacing_numeric(
        n_bar, config.d_h, config.k_e, bracket=bracket, tol=config.optimizer.tol
    )
    analytic = ClosedFormService.optimal_spacing_analytic(config.d_h)
    report = SpacingReport(
        n_bar=n_bar,
        height=config.d_h,
        k_e=config.k_e,
        analytic=analytic,
        numeric=numeric,
        crlb_at_numeric=ClosedFormService.square_grid_crlb(
            SquareGridSpec(spacing=numeric, n_bar=n_bar, height=config.d_h, k_e=config.k_e)
        ),
        bracket=bracket,
        tol=config.optimizer.tol,
    )
    save_report_json(run.output("report.json"), report_document(config_document(config), report))
    lines = [
        f"optimal spacing: {format_cell(numeric)} m",
        f"analytic optimum (N=4): {format_cell(analytic)} m",
        f"crlb at optimum: {format_cell(report.crlb_at_numeric)} m^2",
    ]
    save_summary(run.output("summary.txt"), config, lines)
    run.echo(lines)

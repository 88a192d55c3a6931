import click

from controllers.common import RunContext, build_array, experiment_options, with_run_context
from core import PinchingError, get_logger
from schemas import report_document
from services import EstimationService, ExperimentService
from utils import config_document, format_cell, save_report_json, save_summary

log = get_logger("cli.validation")


@click.command("validate-mc")
@experiment_options
@click.option(
    "--workers",
    type=click.IntRange(min=1),
    default=None,
    help="Threads for the trials (default: the document, else PINCRLB_WORKERS).",
)
@with_run_context
def validate_mc(run: RunContext):
    """
    Monte-Carlo run of the maximum-likelihood estimator against the CRLB.

    The report does not depend on the number of workers.
    """
    config = run.config
    array = build_array(config, run.area)
    report = EstimationService.run_mc(
        run.model,
        run.user,
        array,
        config.trials,
        config.seed,
        run.area,
        coarse_resolution=config.coarse_resolution,
        workers=run.workers,
    )
    save_report_json(run.output("report.json"), report_document(config_document(config), report))
    lines = [
        f"trials: {report.trials}",
        f"mse: {format_cell(report.mse)} m^2",
        f"crlb: {format_cell(report.crlb_paper)} m^2 (full matrix {format_cell(report.crlb_full)})",
        f"mse / crlb: {format_cell(report.ratio_paper)}",
    ]
    save_summary(run.output("summary.txt"), config, lines)
    log.info("monte carlo finished: ratio %s", format_cell(report.ratio_paper))
    run.echo(lines)


@click.command("gradient-check")
@experiment_options
@with_run_context
def gradient_check(run: RunContext):
    """
    Compare the analytic CRLB gradient with central differences on a probe grid.

    Exits with status 1 when the largest relative error reaches the tolerance.
    """
    config = run.config
    array = build_array(config, run.area)
    report = ExperimentService.gradient_check(run.model, array, run.area, probes=config.probes)
    save_report_json(run.output("report.json"), report_document(config_document(config), report))
    lines = [
        f"probes: {report.probes} ({report.skipped} skipped)",
        f"max relative error: {format_cell(report.max_relative_error)}",
        f"result: {'pass' if report.passed else 'fail'}",
    ]
    save_summary(run.output("summary.txt"), config, lines)
    run.echo(lines)
    if not report.passed:
        raise PinchingError(
            f"gradient check failed: max relative error "
            f"{format_cell(report.max_relative_error)} >= {format_cell(report.tolerance)}"
        )

import functools
from pathlib import Path
from typing import Optional

import click
from pydantic import BaseModel, ConfigDict, ValidationError

from core import ConfigError, configure_logging, env, get_logger, load_config
from core.config import describe_validation_error
from models import AntennaArray, Point3, RangeModel, ServiceArea
from schemas import ExperimentConfig, ResolutionSchemaIn
from services import ClosedFormService, GeometryService

log = get_logger("cli")


def _parse_resolution(ctx, param, value: Optional[str]) -> Optional[ResolutionSchemaIn]:
    if value is None:
        return None
    try:
        return ResolutionSchemaIn.parse(value)
    except ValidationError as e:
        raise click.BadParameter(describe_validation_error(e))
    except ValueError as e:
        raise click.BadParameter(str(e))


def experiment_options(command):
    """Flags shared by every command: --config, --out, --seed, --resolution, --quiet."""
    options = [
        click.option(
            "--config",
            "config_path",
            type=click.Path(dir_okay=False, path_type=Path),
            default=None,
            help="JSON experiment configuration; defaults apply when omitted.",
        ),
        click.option(
            "--out",
            type=click.Path(file_okay=False, path_type=Path),
            default=None,
            help="Output directory (overrides the document and PINCRLB_OUTPUT_DIR).",
        ),
        click.option("--seed", type=click.IntRange(min=0), default=None),
        click.option(
            "--resolution",
            callback=_parse_resolution,
            default=None,
            metavar="NXxNY",
            help="Grid resolution, e.g. 200x50.",
        ),
        click.option("--quiet", is_flag=True, help="Only log warnings and errors."),
    ]
    for option in reversed(options):
        command = option(command)
    return command


class RunContext(BaseModel):
    """A resolved configuration plus the process-level settings of one command run."""

    model_config = ConfigDict(frozen=True)
    config: ExperimentConfig
    out_dir: Path
    workers: int
    quiet: bool = False

    @property
    def area(self) -> ServiceArea:
        return self.config.area.to_area()

    @property
    def model(self) -> RangeModel:
        return RangeModel(k_e=self.config.k_e)

    @property
    def resolution(self) -> tuple[int, int]:
        return (self.config.resolution.nx, self.config.resolution.ny)

    @property
    def user(self) -> Point3:
        return Point3(x=self.config.user.x, y=self.config.user.y, z=0.0)

    def output(self, name: str) -> Path:
        return self.out_dir / name

    def echo(self, lines: list[str]) -> None:
        if not self.quiet:
            for line in lines:
                click.echo(line)


def apply_overrides(config: ExperimentConfig, **overrides) -> ExperimentConfig:
    """Re-validate `config` with command-line values replacing document values."""
    updates = {key: value for key, value in overrides.items() if value is not None}
    if not updates:
        return config
    try:
        return ExperimentConfig.model_validate({**config.model_dump(), **updates})
    except ValidationError as e:
        raise ConfigError(describe_validation_error(e))


def resolve_run(
    config_path: Optional[Path],
    out: Optional[Path],
    seed: Optional[int],
    resolution: Optional[ResolutionSchemaIn],
    quiet: bool,
    workers: Optional[int] = None,
) -> RunContext:
    configure_logging("WARNING" if quiet else env.LOG_LEVEL)
    config = load_config(config_path)
    if workers is None:
        workers = config.workers if "workers" in config.model_fields_set else env.WORKERS
    config = apply_overrides(
        config,
        seed=seed,
        resolution=resolution.model_dump() if resolution is not None else None,
    )
    out_dir = Path(out or config.output_dir or env.OUTPUT_DIR)
    log.debug("output directory %s, %d worker(s)", out_dir, workers)
    return RunContext(config=config, out_dir=out_dir, workers=workers, quiet=quiet)


def build_array(config: ExperimentConfig, area: ServiceArea) -> AntennaArray:
    """Antenna array described by the `array` section of the configuration."""
    spec = config.array
    if spec.kind == "waveguide":
        return GeometryService.make_waveguide_array(
            spec.n_wg, spec.n // spec.n_wg, area, config.d_h
        )
    if spec.kind == "circular":
        return GeometryService.make_circular_array(spec.n, spec.wavelength, config.d_h)
    if spec.kind == "square-cluster":
        spacing = spec.spacing or ClosedFormService.optimal_spacing_analytic(config.d_h)
        return GeometryService.make_square_cluster(
            Point3(x=spec.center_x, y=spec.center_y, z=0.0),
            spacing,
            spec.n_bar,
            config.d_h,
        )
    return GeometryService.make_focal_segment_array(
        spec.focal_x,
        spec.segment_length or area.d_l / 2,
        spec.n_wg,
        spec.n // spec.n_wg,
        area,
        config.d_h,
    )


def waveguide_count(config: ExperimentConfig) -> int:
    return getattr(config.array, "n_wg", 2)


def quadrant_size(config: ExperimentConfig, n_bar: Optional[int]) -> int:
    """`--n-bar` if given, else the configured square cluster's, else 1."""
    if n_bar is not None:
        return n_bar
    return getattr(config.array, "n_bar", 1)


def with_run_context(command):
    """Resolve the shared flags into a `RunContext` passed as the first argument."""

    @functools.wraps(command)
    def wrapper(config_path, out, seed, resolution, quiet, **kwargs):
        run = resolve_run(
            config_path, out, seed, resolution, quiet, workers=kwargs.pop("workers", None)
        )
        return command(run, **kwargs)

    return wrapper

"""
Command-line front end of the pinching-antenna CRLB toolkit.

Commands:
- `heatmap`: CRLB field of the configured array (`field.csv`, `field.svg`).
- `compare`: averaged CRLB of pinching against conventional arrays (`compare.csv`).
- `sweep-spacing`: square-grid CRLB against the antenna spacing (`curve.csv`).
- `optimize-spacing`: golden-section optimum of the spacing (`report.json`).
- `validate-mc`: Monte-Carlo maximum-likelihood run against the CRLB (`report.json`).
- `gradient-check`: analytic gradient against finite differences (`report.json`).

Every command also writes `summary.txt`. Errors are printed as one line on
stderr and mapped to the exit code of their `PinchingError` subclass.
"""

import sys
from typing import Sequence

import click
from pydantic import ValidationError

from controllers import (
    compare,
    gradient_check,
    heatmap,
    optimize_spacing,
    sweep_spacing,
    validate_mc,
)
from core import ConfigError, PinchingError
from core.config import describe_validation_error


class PinchingCommandError(click.ClickException):
    def __init__(self, error: PinchingError):
        super().__init__(error.detail)
        self.exit_code = error.exit_code


class PinchingGroup(click.Group):
    """Group translating toolkit errors into click errors with their exit codes."""

    def invoke(self, ctx: click.Context):
        try:
            return super().invoke(ctx)
        except PinchingError as e:
            raise PinchingCommandError(e) from e
        except ValidationError as e:
            raise PinchingCommandError(ConfigError(describe_validation_error(e))) from e


@click.group(cls=PinchingGroup)
def cli():
    """CRLB analysis of pinching-antenna and conventional positioning arrays."""


cli.add_command(heatmap)
cli.add_command(compare)
cli.add_command(sweep_spacing)
cli.add_command(optimize_spacing)
cli.add_command(validate_mc)
cli.add_command(gradient_check)


def run_command(argv: Sequence[str]) -> int:
    """
    Run one command and return its exit status instead of exiting.

    Usage errors print the usage text; toolkit errors print a single line.
    """
    try:
        result = cli.main(args=list(argv), prog_name="pincrlb", standalone_mode=False)
    except click.ClickException as e:
        e.show()
        return e.exit_code
    except click.exceptions.Exit as e:
        return e.exit_code
    except click.Abort:
        click.echo("Aborted!", err=True)
        return 1
    return result if isinstance(result, int) else 0


def main():
    sys.exit(run_command(sys.argv[1:]))


if __name__ == "__main__":
    main()

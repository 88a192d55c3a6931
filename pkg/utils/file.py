import json
import math
from pathlib import Path
from typing import Any, Iterable, Sequence

from core import get_logger
from models import CrlbField, SweepCurve
from schemas import CompareRow, ExperimentConfig

log = get_logger("output")


def format_cell(value: float) -> str:
    """Text form of a number: 9 significant digits, `inf` for non-finite."""
    if isinstance(value, int):
        return str(value)
    if not math.isfinite(value):
        return "inf"
    return f"{value:.9g}"


def config_document(config: ExperimentConfig) -> dict[str, Any]:
    """Resolved configuration as recorded in outputs; the thread count is left out."""
    return config.model_dump(mode="json", exclude={"workers"})


def config_header(config: ExperimentConfig) -> str:
    return json.dumps(config_document(config), sort_keys=True)


def _prepare(path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    return path


def save_table(
    path: Path,
    config: ExperimentConfig,
    columns: Sequence[str],
    rows: Iterable[Sequence[float]],
    extra_headers: Sequence[str] = (),
) -> Path:
    """
    Save a comma-separated table to `path`.

    The file begins with `#` lines: the resolved configuration as JSON, then
    any `extra_headers`. Directories are created as needed.

    Args:
        path (Path): Destination file.
        config (ExperimentConfig): Configuration recorded in the header.
        columns (Sequence[str]): Column names.
        rows (Iterable[Sequence[float]]): Row values, formatted with `format_cell`.
        extra_headers (Sequence[str]): Further comment lines, without the `#`.

    Returns:
        Path: The path written.
    """
    path = _prepare(path)
    lines = [f"# config: {config_header(config)}"]
    lines += [f"# {header}" for header in extra_headers]
    lines.append(",".join(columns))
    lines += [",".join(format_cell(value) for value in row) for row in rows]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    log.info("wrote %s", path)
    return path


def save_curve_csv(path: Path, config: ExperimentConfig, curve: SweepCurve) -> Path:
    return save_table(path, config, ("delta", "crb"), curve.points)


def save_field_csv(path: Path, config: ExperimentConfig, field: CrlbField) -> Path:
    """Grid file: nx and ny in the header, then one (x, y, crb) row per cell, x fastest."""
    xs, ys = field.xs, field.ys
    rows = (
        (xs[ix], ys[iy], field.values[iy, ix])
        for iy in range(field.ny)
        for ix in range(field.nx)
    )
    return save_table(
        path,
        config,
        ("x", "y", "crb"),
        rows,
        extra_headers=(f"grid: nx={field.nx} ny={field.ny} array={field.array_id}",),
    )


def save_compare_csv(
    path: Path, config: ExperimentConfig, rows: list[CompareRow]
) -> Path:
    return save_table(
        path,
        config,
        ("n", "pinching", "conventional", "delta_crb"),
        ((row.n, row.pinching, row.conventional, row.delta_crb) for row in rows),
    )


def save_report_json(path: Path, document: dict[str, Any]) -> Path:
    """Write a report document (`config` first, then `result`)."""
    path = _prepare(path)
    path.write_text(json.dumps(document, indent=2) + "\n", encoding="utf-8")
    log.info("wrote %s", path)
    return path


def save_summary(path: Path, config: ExperimentConfig, lines: Sequence[str]) -> Path:
    path = _prepare(path)
    text = [f"# config: {config_header(config)}", *lines]
    path.write_text("\n".join(text) + "\n", encoding="utf-8")
    log.info("wrote %s", path)
    return path

import io
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from core import get_logger  # noqa: E402
from models import AntennaArray, CrlbField  # noqa: E402
from schemas import ExperimentConfig  # noqa: E402
from utils.file import config_header  # noqa: E402

log = get_logger("output")

SVG_HASH_SALT = "pincrlb"
DISPLAY_PERCENTILE = 99.0


def display_values(values: np.ndarray) -> np.ndarray:
    """Copy of `values` with non-finite cells replaced by the 99th percentile of the finite ones."""
    finite = np.isfinite(values)
    ceiling = np.percentile(values[finite], DISPLAY_PERCENTILE) if finite.any() else 0.0
    return np.where(finite, values, ceiling)


def render_heatmap_svg(field: CrlbField, array: AntennaArray | None = None) -> str:
    """
    Render a CRLB field as a self-contained SVG document.

    Colours follow a linear scale over the finite values; antenna ground
    projections are drawn as white markers when `array` is given.
    """
    x_lo, x_hi = field.area.x_bounds
    y_lo, y_hi = field.area.y_bounds
    x_edges = np.linspace(x_lo, x_hi, field.nx + 1)
    y_edges = np.linspace(y_lo, y_hi, field.ny + 1)

    with plt.rc_context({"svg.hashsalt": SVG_HASH_SALT, "svg.fonttype": "none"}):
        fig, ax = plt.subplots(figsize=(10, 3.5))
        mesh = ax.pcolormesh(
            x_edges, y_edges, display_values(field.values), cmap="viridis", shading="flat"
        )
        if array is not None:
            positions = array.positions
            ax.scatter(
                positions[:, 0], positions[:, 1], marker="x", s=18, c="white", linewidths=1
            )
        fig.colorbar(mesh, ax=ax, label="CRLB (m$^2$)")
        ax.set_xlim(x_lo, x_hi)
        ax.set_ylim(y_lo, y_hi)
        ax.set_xlabel("x (m)")
        ax.set_ylabel("y (m)")
        ax.set_title(field.array_id)
        ax.set_aspect("equal")
        buffer = io.StringIO()
        fig.savefig(buffer, format="svg", metadata={"Date": None}, bbox_inches="tight")
        plt.close(fig)
    return buffer.getvalue()


def save_heatmap_svg(
    path: Path,
    config: ExperimentConfig,
    field: CrlbField,
    array: AntennaArray | None = None,
) -> Path:
    """Write the heatmap with the resolved configuration as an XML comment after the declaration."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    document = render_heatmap_svg(field, array)
    comment = f"<!-- config: {config_header(config).replace('--', '- -')} -->\n"
    declaration_end = document.find("?>") + 2 if document.startswith("<?xml") else 0
    if declaration_end:
        document = (
            document[:declaration_end] + "\n" + comment + document[declaration_end:].lstrip("\n")
        )
    else:
        document = comment + document
    path.write_text(document, encoding="utf-8")
    log.info("wrote %s", path)
    return path

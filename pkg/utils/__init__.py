from .file import (
    format_cell,
    config_document,
    config_header,
    save_table,
    save_curve_csv,
    save_field_csv,
    save_compare_csv,
    save_report_json,
    save_summary,
)
from .rng import standard_normals, trial_generator
from .svg import render_heatmap_svg, save_heatmap_svg

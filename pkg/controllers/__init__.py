from .heatmap import heatmap
from .compare import compare
from .spacing import sweep_spacing, optimize_spacing
from .validation import validate_mc, gradient_check

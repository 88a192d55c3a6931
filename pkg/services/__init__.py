from .geometry import GeometryService
from .crlb import CrlbService
from .closed_form import ClosedFormService
from .estimation import EstimationService
from .experiments import ExperimentService

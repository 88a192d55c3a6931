from .env_config import env
from .exceptions import (
    PinchingError,
    ConfigError,
    InvalidParameterError,
    GeometryError,
    SingularityError,
    ConvergenceError,
)
from .logger import logger, get_logger, configure_logging
from .config import parse_config, load_config

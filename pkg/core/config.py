from pathlib import Path

from pydantic import ValidationError

from core.exceptions import ConfigError
from schemas.config import ExperimentConfig


def describe_validation_error(error: ValidationError) -> str:
    """First offending key as a dotted path plus pydantic's reason."""
    first = error.errors()[0]
    path = ".".join(str(part) for part in first["loc"]) or "<document>"
    return f"{path}: {first['msg']}"


def parse_config(document: str) -> ExperimentConfig:
    """
    Parse and validate a JSON experiment configuration.

    An empty (or whitespace-only) document yields every default. Unknown keys
    and out-of-range values are rejected.

    Args:
        document (str): The JSON text.

    Returns:
        ExperimentConfig: The validated configuration with defaults applied.

    Raises:
        ConfigError: Naming the first offending key and the reason.
    """
    if not document.strip():
        return ExperimentConfig()
    try:
        return ExperimentConfig.model_validate_json(document)
    except ValidationError as e:
        raise ConfigError(describe_validation_error(e))


def load_config(path: str | Path | None) -> ExperimentConfig:
    """Read `path` (None means defaults) and prefix errors with the file name."""
    if path is None:
        return ExperimentConfig()
    try:
        document = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"{path}: cannot read config ({e.strerror})")
    try:
        return parse_config(document)
    except ConfigError as e:
        raise ConfigError(f"{path}: {e.detail}")

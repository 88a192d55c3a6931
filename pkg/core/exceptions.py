class PinchingError(Exception):
    """
    Base error for the toolkit.

    Attributes:
        detail (str): Human-readable reason, printed as the CLI diagnostic line.
        exit_code (int): Process exit status used by the CLI.
    """

    exit_code = 1

    def __init__(self, detail: str):
        super().__init__(detail)
        self.detail = detail


class ConfigError(PinchingError):
    exit_code = 2


class InvalidParameterError(PinchingError):
    exit_code = 2


class GeometryError(PinchingError):
    exit_code = 3


class SingularityError(PinchingError):
    exit_code = 4


class ConvergenceError(PinchingError):
    exit_code = 5

import logging

LOGGER_NAME = "pincrlb"
LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"

logger = logging.getLogger(LOGGER_NAME)


def get_logger(name: str) -> logging.Logger:
    return logger.getChild(name)


def configure_logging(level: str | int = "INFO") -> logging.Logger:
    """
    Point the `pincrlb` logger at the current stderr with a single handler.

    Earlier handlers are replaced, so commands invoked repeatedly in one
    process (tests) neither stack handlers nor write to a stale stream.
    """
    for handler in list(logger.handlers):
        logger.removeHandler(handler)
    handler = logging.StreamHandler()
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    logger.addHandler(handler)
    logger.setLevel(level)
    logger.propagate = False
    return logger

"""Process-wide logger for deltaclass pipelines.

Diagnostics go to stderr so that reports and sequences written to stdout
stay byte-clean. DELTACLASS_LOG_LEVEL sets the initial level; the CLI's
--log-level overrides it.
"""

import logging
import os
import sys

LOG_FORMAT = "[DELTACLASS] %(asctime)s - %(levelname)s - %(message)s"
LOG_DATE_FORMAT = "%Y-%m-%d %H:%M:%S"

LEVELS = {
    "DEBUG": logging.DEBUG,
    "INFO": logging.INFO,
    "WARNING": logging.WARNING,
    "ERROR": logging.ERROR,
    "CRITICAL": logging.CRITICAL,
}


def resolve_level(name: str | None, default: int = logging.INFO) -> int:
    """Map a case-insensitive level name to its number; unknown names give the default."""
    if not name:
        return default
    return LEVELS.get(name.strip().upper(), default)


class DeltaclassLogger:
    """Holder of the cached default logger."""

    _default_logger: logging.Logger | None = None

    @classmethod
    def get_logger(cls, name: str = "deltaclass") -> logging.Logger:
        """
        Get or create the default logger.

        The first call attaches a single stderr handler at the level named by
        DELTACLASS_LOG_LEVEL (INFO when unset or unknown) and stops
        propagation to the root logger. Later calls return the cached logger.

        :param name: Logger name
        :return: Configured logger instance
        """
        if cls._default_logger is None:
            logger = logging.getLogger(name)
            if not logger.handlers:
                _configure(logger, resolve_level(os.getenv("DELTACLASS_LOG_LEVEL")))
            cls._default_logger = logger
        return cls._default_logger

    @classmethod
    def reset(cls) -> None:
        """Drop the cached logger and its handlers (for tests)."""
        if cls._default_logger is not None:
            cls._default_logger.handlers.clear()
            cls._default_logger = None


def _configure(logger: logging.Logger, level: int) -> None:
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter(LOG_FORMAT, datefmt=LOG_DATE_FORMAT))
    logger.addHandler(handler)
    logger.propagate = False
    _apply_level(logger, level)


def _apply_level(logger: logging.Logger, level: int) -> None:
    logger.setLevel(level)
    for handler in logger.handlers:
        handler.setLevel(level)


def get_logger(name: str = "deltaclass") -> logging.Logger:
    return DeltaclassLogger.get_logger(name)


def set_level(level: str) -> None:
    """
    Override the level of the default logger and its handlers.

    :param level: DEBUG, INFO, WARNING, ERROR or CRITICAL (any case)
    """
    _apply_level(get_logger(), resolve_level(level))

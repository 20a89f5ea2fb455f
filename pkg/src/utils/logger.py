"""
Logging utility for the coalescing-flow toolkit

Console output goes to stderr; ``kernel-eval`` writes its CSV to stdout.
"""

import logging
import sys
from contextlib import contextmanager
from pathlib import Path
from typing import Iterator, Optional, Union

ROOT_LOGGER_NAME = 'coalesce'
DEFAULT_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
RUN_LOG_NAME = 'run.log'

# Chatty below WARNING: font discovery and image backends
NOISY_LOGGERS = ('matplotlib', 'PIL')


def _file_handler(path: Union[str, Path], level: int, formatter: logging.Formatter) -> logging.FileHandler:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    handler = logging.FileHandler(path)
    handler.setLevel(level)
    handler.setFormatter(formatter)
    return handler


def setup_logging(
    level: int = logging.INFO,
    log_file: Optional[str] = None,
    format_string: Optional[str] = None
) -> logging.Logger:
    """
    Configure the root logger for a command-line session

    Args:
        level: Logging level (default: INFO)
        log_file: Optional log file path, created with its parent directory
        format_string: Custom format string

    Returns:
        The toolkit's top-level logger
    """
    formatter = logging.Formatter(format_string or DEFAULT_FORMAT)

    root_logger = logging.getLogger()
    root_logger.setLevel(level)
    root_logger.handlers.clear()

    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setLevel(level)
    console_handler.setFormatter(formatter)
    root_logger.addHandler(console_handler)

    if log_file:
        root_logger.addHandler(_file_handler(log_file, level, formatter))

    for noisy_name in NOISY_LOGGERS:
        logging.getLogger(noisy_name).setLevel(logging.NOTSET if level <= logging.DEBUG else logging.WARNING)

    logger = logging.getLogger(ROOT_LOGGER_NAME)
    logger.debug("Logging system initialized")
    return logger


@contextmanager
def run_log(run_dir: Union[str, Path], level: int = logging.DEBUG) -> Iterator[Path]:
    """
    Copy every record emitted inside the block into ``<run_dir>/run.log``

    The handler is attached to the root logger and removed on exit, so each
    run directory carries the log of exactly one run.
    """
    path = Path(run_dir) / RUN_LOG_NAME
    handler = _file_handler(path, level, logging.Formatter(DEFAULT_FORMAT))
    root_logger = logging.getLogger()
    previous_level = root_logger.level
    root_logger.addHandler(handler)
    if previous_level > level:
        root_logger.setLevel(level)
    try:
        yield path
    finally:
        root_logger.removeHandler(handler)
        root_logger.setLevel(previous_level)
        handler.close()


def get_logger(name: str) -> logging.Logger:
    """Logger below the toolkit's namespace, e.g. ``coalesce.ReplicaPool``"""
    return logging.getLogger(f'{ROOT_LOGGER_NAME}.{name}')


class LoggerMixin:
    """Gives a class a ``logger`` property named after the class"""

    @property
    def logger(self) -> logging.Logger:
        return get_logger(self.__class__.__name__)

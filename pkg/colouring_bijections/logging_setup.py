"""
Structured logging for the command line and long-running searches.

Reports own stdout. Log events go to stderr as console lines, or to a file
as one JSON object per line.
"""

import atexit
import logging
import sys
import time
from pathlib import Path
from typing import List, Optional, TextIO

import structlog

LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")

_log_sink: Optional[TextIO] = None


def _event_processors(with_callsite: bool) -> List:
    chain = [
        structlog.contextvars.merge_contextvars,
        structlog.processors.add_log_level,
        structlog.processors.TimeStamper(fmt="ISO", utc=True),
    ]
    if with_callsite:
        chain.append(
            structlog.processors.CallsiteParameterAdder(
                parameters=[structlog.processors.CallsiteParameter.FUNC_NAME]
            )
        )
    return chain


def setup_logging(
    level: str = "INFO",
    log_file: Optional[Path] = None,
    run_id: Optional[str] = None
):
    """
    Configure structlog once per process.

    Args:
        level: One of DEBUG, INFO, WARNING, ERROR, CRITICAL (any case)
        log_file: Append JSON lines here instead of writing to stderr
        run_id: Bound to every event, and adds the calling function name

    Returns:
        Logger bound to the run id, if one was given
    """
    name = level.upper()
    if name not in LEVELS:
        raise ValueError(f"Unknown log level: {level}")
    threshold = logging.getLevelName(name)

    logging.basicConfig(format="%(message)s", stream=sys.stderr, level=threshold)

    global _log_sink
    if _log_sink is not None:
        atexit.unregister(_log_sink.close)
        _log_sink.close()
        _log_sink = None

    processors = _event_processors(with_callsite=run_id is not None)
    if log_file is not None:
        processors += [structlog.processors.dict_tracebacks, structlog.processors.JSONRenderer()]
        sink = _log_sink = open(log_file, "a")
        atexit.register(sink.close)
    else:
        processors.append(structlog.dev.ConsoleRenderer(colors=False))
        sink = sys.stderr

    structlog.configure(
        processors=processors,
        wrapper_class=structlog.make_filtering_bound_logger(threshold),
        context_class=dict,
        logger_factory=structlog.WriteLoggerFactory(file=sink),
        cache_logger_on_first_use=False,
    )

    bound = structlog.get_logger()
    return bound.bind(run_id=run_id) if run_id else bound


class LogCapture:
    """
    Time a block and log how it ended.

    Emits "Starting <operation>" at debug level, then "Completed <operation>"
    or "Failed <operation>" with ``duration_seconds``. Exceptions propagate.
    """

    def __init__(self, logger, operation: str, **context):
        self.logger = logger.bind(**context) if context else logger
        self.operation = operation
        self.duration_seconds = 0.0
        self._started = 0.0

    def __enter__(self):
        self._started = time.perf_counter()
        self.logger.debug(f"Starting {self.operation}")
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        self.duration_seconds = round(time.perf_counter() - self._started, 6)
        if exc_type is None:
            self.logger.info(f"Completed {self.operation}", duration_seconds=self.duration_seconds)
        else:
            self.logger.error(
                f"Failed {self.operation}", duration_seconds=self.duration_seconds, error=str(exc_val)
            )
        return False

"""
Shared fixtures.
"""

import logging
from pathlib import Path

import pytest
import structlog

DATA_DIR = Path(__file__).resolve().parent.parent / "data"


@pytest.fixture(autouse=True)
def quiet_logging():
    """Warnings and above only, written to whatever stdout is current."""
    structlog.configure(
        processors=[structlog.processors.add_log_level, structlog.dev.ConsoleRenderer(colors=False)],
        wrapper_class=structlog.make_filtering_bound_logger(logging.WARNING),
        logger_factory=structlog.PrintLoggerFactory(),
        cache_logger_on_first_use=False,
    )
    yield


@pytest.fixture
def data_dir() -> Path:
    return DATA_DIR

"""Structured logging configuration using structlog."""

import logging
import sys
from typing import Any, TextIO

import structlog
from structlog.contextvars import merge_contextvars
from structlog.dev import ConsoleRenderer
from structlog.processors import JSONRenderer, TimeStamper, add_log_level

_log_level = "WARNING"

_LEVELS = {
    "debug": logging.DEBUG,
    "info": logging.INFO,
    "warning": logging.WARNING,
    "error": logging.ERROR,
    "critical": logging.CRITICAL,
}


def _filter_by_level(
    logger: Any,
    method_name: str,
    event_dict: dict[str, Any],
) -> dict[str, Any]:
    """Drop events below the configured level."""
    configured_level = _LEVELS.get(_log_level.lower(), logging.INFO)
    method_level = _LEVELS.get(method_name, logging.INFO)
    if method_level >= configured_level:
        return event_dict
    raise structlog.DropEvent()


def configure_logging(
    json_output: bool = False,
    level: str = "INFO",
    stream: TextIO | None = None,
) -> None:
    """Configure structlog processors.

    Args:
        json_output: Render JSON lines instead of the console format.
        level: Minimum level name ("DEBUG" ... "CRITICAL").
        stream: Destination; defaults to stderr so stdout stays free for reports.
    """
    global _log_level
    if level.lower() not in _LEVELS:
        raise ValueError(f"unknown log level: {level}")
    _log_level = level

    processors: list[Any] = [
        merge_contextvars,
        _filter_by_level,
        add_log_level,
        TimeStamper(fmt="iso"),
        JSONRenderer(sort_keys=True) if json_output else ConsoleRenderer(colors=False),
    ]

    structlog.configure(
        processors=processors,
        context_class=dict,
        logger_factory=structlog.PrintLoggerFactory(file=stream or sys.stderr),
        cache_logger_on_first_use=False,
    )


def get_logger(name: str) -> Any:
    """Return a structlog bound logger for ``name``."""
    return structlog.get_logger(name)

"""Structured logging for beam runs.

Records carry the fields of the active run context (command, seed, preset,
suite) so that JSON logs from one invocation can be filtered together.
"""

import json
import logging
import sys
import time
from contextlib import contextmanager
from contextvars import ContextVar
from datetime import datetime, timezone
from typing import Any, Callable, Dict, Iterator, Optional, TypeVar

T = TypeVar("T")

_RUN_CONTEXT: ContextVar[Dict[str, Any]] = ContextVar("beams_run_context", default={})

PLAIN_FORMAT = "%(asctime)s | %(levelname)s | %(name)s [%(threadName)s] | %(message)s%(context)s"


def current_context() -> Dict[str, Any]:
    """Fields of the innermost active run context."""
    return dict(_RUN_CONTEXT.get())


@contextmanager
def run_context(**fields: Any) -> Iterator[Dict[str, Any]]:
    """Attach fields to every record logged inside the block.

    Nested contexts extend the outer one; ``None`` values are dropped.

    Example:
        >>> with run_context(command="verify", seed=0):
        ...     logger.info("starting")
    """
    merged = {**_RUN_CONTEXT.get(), **{k: v for k, v in fields.items() if v is not None}}
    token = _RUN_CONTEXT.set(merged)
    try:
        yield merged
    finally:
        _RUN_CONTEXT.reset(token)


def carry_context(fn: Callable[..., T]) -> Callable[..., T]:
    """Wrap ``fn`` so worker threads log with the caller's run context."""
    fields = current_context()

    def wrapped(*args: Any, **kwargs: Any) -> T:
        with run_context(**fields):
            return fn(*args, **kwargs)

    return wrapped


class RunContextFilter(logging.Filter):
    """Copy the run context onto the record as ``extra_fields``."""

    def filter(self, record: logging.LogRecord) -> bool:
        fields = current_context()
        fields.update(getattr(record, "extra_fields", None) or {})
        record.extra_fields = fields
        record.context = "".join(f" {k}={v}" for k, v in fields.items())
        return True


class JSONFormatter(logging.Formatter):
    """JSON formatter for structured logging."""

    def format(self, record: logging.LogRecord) -> str:
        """Format log record as JSON.

        Args:
            record: Log record to format

        Returns:
            JSON formatted log string, one object per line
        """
        log_obj: Dict[str, Any] = {
            "timestamp": datetime.fromtimestamp(record.created, tz=timezone.utc).isoformat(),
            "level": record.levelname,
            "logger": record.name,
            "message": record.getMessage(),
            "thread": record.threadName,
            "where": f"{record.module}:{record.funcName}:{record.lineno}",
        }

        if record.exc_info:
            log_obj["exception"] = self.formatException(record.exc_info)

        context = getattr(record, "extra_fields", None)
        if context:
            log_obj["context"] = context

        return json.dumps(log_obj, default=str)


def setup_logging(
    level: str = "INFO",
    json_format: bool = True,
    log_file: Optional[str] = None
) -> None:
    """Set up structured logging configuration.

    Console output goes to stderr; stdout is reserved for command results.

    Args:
        level: Logging level (DEBUG, INFO, WARNING, ERROR, CRITICAL)
        json_format: Whether to use JSON formatting
        log_file: Optional log file path
    """
    root_logger = logging.getLogger()
    for handler in root_logger.handlers[:]:
        root_logger.removeHandler(handler)

    root_logger.setLevel(getattr(logging, level.upper(), logging.INFO))

    formatter: logging.Formatter = JSONFormatter() if json_format else logging.Formatter(PLAIN_FORMAT)
    handlers: list = [logging.StreamHandler(sys.stderr)]
    if log_file:
        handlers.append(logging.FileHandler(log_file, encoding="utf-8"))

    for handler in handlers:
        handler.setFormatter(formatter)
        handler.addFilter(RunContextFilter())
        root_logger.addHandler(handler)

    # matplotlib logs font discovery at DEBUG
    logging.getLogger("matplotlib").setLevel(max(logging.WARNING, root_logger.level))


def get_logger(name: str) -> logging.Logger:
    """Module logger; context fields come from :func:`run_context`."""
    return logging.getLogger(name)


@contextmanager
def log_duration(logger: logging.Logger, label: str, level: int = logging.DEBUG) -> Iterator[None]:
    """Log the wall time spent inside the block."""
    start = time.perf_counter()
    try:
        yield
    finally:
        logger.log(level, f"{label} took {time.perf_counter() - start:.3f}s")

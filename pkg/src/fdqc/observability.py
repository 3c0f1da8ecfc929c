"""
Observability infrastructure for fdqc.

Provides:
- Structured JSON logging with trace IDs
- Prometheus counters for traced operations and for the rounds and
  corrections of finished sessions

Entries go through the ``fdqc`` logger and therefore to standard error;
nothing here writes to the JSON documents the CLI prints.
"""

from contextlib import contextmanager
import json
import logging
import time
from typing import Any
import uuid

# Prometheus metrics (optional dependency)
try:
    from prometheus_client import Counter, Histogram

    PROMETHEUS_AVAILABLE = True
except ImportError:
    PROMETHEUS_AVAILABLE = False

if PROMETHEUS_AVAILABLE:
    OPERATION_COUNT = Counter(
        "fdqc_operations_total", "Traced sessions, sweeps and commands", ["operation", "status"]
    )
    OPERATION_DURATION = Histogram(
        "fdqc_operation_duration_seconds",
        "Wall time of traced operations",
        ["operation"],
        buckets=[0.001, 0.01, 0.05, 0.1, 0.5, 1.0, 5.0, 30.0],
    )
    ERROR_COUNT = Counter(
        "fdqc_errors_total", "Traced operations that raised", ["operation", "error_type"]
    )
    ROUND_COUNT = Counter("fdqc_rounds_total", "Delegation rounds executed", ["mode"])
    CORRECTION_COUNT = Counter(
        "fdqc_corrections_total", "Toffoli correction rounds delegated", ["mode"]
    )


def _new_trace_id() -> str:
    return uuid.uuid4().hex[:8]


class StructuredLogger:
    """JSON-formatted logger with trace ID support."""

    def __init__(self, name: str = "fdqc"):
        self.logger = logging.getLogger(name)
        self._trace_id: str | None = None

    def set_trace_id(self, trace_id: str):
        self._trace_id = trace_id

    def _format_entry(self, level: str, message: str, **fields) -> str:
        entry = {
            "timestamp": time.strftime("%Y-%m-%dT%H:%M:%S%z"),
            "level": level,
            "message": message,
            "service": "fdqc",
            "trace_id": self._trace_id or _new_trace_id(),
            **fields,
        }
        return json.dumps(entry, default=str)

    def _log(self, level: int, message: str, **fields):
        if self.logger.isEnabledFor(level):
            entry = self._format_entry(logging.getLevelName(level), message, **fields)
            self.logger.log(level, entry)

    def info(self, message: str, **fields):
        self._log(logging.INFO, message, **fields)

    def error(self, message: str, **fields):
        self._log(logging.ERROR, message, **fields)

    def warning(self, message: str, **fields):
        self._log(logging.WARNING, message, **fields)

    def debug(self, message: str, **fields):
        self._log(logging.DEBUG, message, **fields)


logger = StructuredLogger()


def _observe(
    operation: str, status: str, started: float, error: Exception | None = None
) -> float:
    duration = time.perf_counter() - started
    if PROMETHEUS_AVAILABLE:
        OPERATION_COUNT.labels(operation=operation, status=status).inc()
        OPERATION_DURATION.labels(operation=operation).observe(duration)
        if error is not None:
            ERROR_COUNT.labels(operation=operation, error_type=type(error).__name__).inc()
    return round(duration * 1000, 2)


@contextmanager
def trace_operation(operation: str, trace_id: str | None = None, **context: Any):
    """Trace a session, sweep or CLI command.

    Logs start and completion at DEBUG and failures at ERROR, each entry
    carrying ``context``. The exception is re-raised.
    """
    trace_id = trace_id or _new_trace_id()
    logger.set_trace_id(trace_id)
    started = time.perf_counter()
    logger.debug(f"Starting {operation}", operation=operation, **context)

    try:
        yield trace_id
    except Exception as e:
        logger.error(
            f"Failed {operation}",
            operation=operation,
            duration_ms=_observe(operation, "error", started, e),
            error=str(e),
            error_type=type(e).__name__,
            **context,
        )
        raise

    logger.debug(
        f"Completed {operation}",
        operation=operation,
        duration_ms=_observe(operation, "success", started),
        status="success",
        **context,
    )


def record_session(mode: str, rounds: int, corrections: int):
    """Count the rounds and correction rounds of a finished session."""
    if PROMETHEUS_AVAILABLE:
        ROUND_COUNT.labels(mode=mode).inc(rounds)
        CORRECTION_COUNT.labels(mode=mode).inc(corrections)

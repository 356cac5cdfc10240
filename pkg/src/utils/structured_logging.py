"""
Structured Logging for boxkit

Provides structured, machine-readable logging using structlog.

Features:
- JSON-formatted logs for batch runs (STRUCTURED_LOGS_JSON=true)
- Human-readable console output for development
- Automatic context binding (command, image, variant)
- Timing of commands and expensive operations

Logs are written to stderr: stdout carries the data records the CLI emits.

Usage:
    from src.utils.structured_logging import get_logger, log_performance

    logger = get_logger("nms", variant="cosine")
    logger.info("nms_complete", n_in=1000, n_out=150)

    with log_performance(logger, "pairwise_iou", n_boxes=1000):
        ious = pairwise_iou(boxes, boxes)
"""

import sys
import time
from contextlib import contextmanager

import structlog

# ==============================================
# Structlog Configuration
# ==============================================


def configure_structlog(json_logs: bool | None = None, log_level: str | None = None):
    """
    Configure structlog for the application.

    Args:
        json_logs: If True, output JSON logs. If None, uses STRUCTURED_LOGS_JSON (default: False)
        log_level: Log level (DEBUG, INFO, WARNING, ERROR). If None, uses LOG_LEVEL (default: INFO)
    """
    from src.config import get_settings

    settings = get_settings()
    if json_logs is None:
        json_logs = settings.structured_logs_json
    if log_level is None:
        log_level = settings.log_level

    processors = [
        structlog.stdlib.add_log_level,
        structlog.processors.TimeStamper(fmt="iso"),
        structlog.contextvars.merge_contextvars,
        structlog.processors.StackInfoRenderer(),
        structlog.processors.format_exc_info,
    ]

    if json_logs:
        processors.append(structlog.processors.JSONRenderer())
    else:
        processors.append(
            structlog.dev.ConsoleRenderer(
                colors=False, exception_formatter=structlog.dev.plain_traceback
            )
        )

    structlog.configure(
        processors=processors,  # type: ignore[arg-type]
        wrapper_class=structlog.make_filtering_bound_logger(_level_to_int(log_level)),
        context_class=dict,
        logger_factory=structlog.PrintLoggerFactory(file=sys.stderr),
        cache_logger_on_first_use=False,
    )


def _level_to_int(level: str) -> int:
    """Convert log level string to integer."""
    levels = {
        "DEBUG": 10,
        "INFO": 20,
        "WARNING": 30,
        "ERROR": 40,
        "CRITICAL": 50,
    }
    return levels.get(level.upper(), 20)


# Initialize structlog on module import
configure_structlog()


# ==============================================
# Logger Factory
# ==============================================


def get_logger(name: str | None = None, **initial_context) -> structlog.BoundLogger:
    """
    Get a structured logger with optional initial context.

    Args:
        name: Logger name (typically the module or subcommand)
        **initial_context: Context bound to every event of this logger

    Example:
        logger = get_logger("assign", image="frankfurt_000000")
        logger.info("assignment_complete", positives=12, semi_positives=40)
    """
    logger = structlog.get_logger(name)
    if initial_context:
        logger = logger.bind(**initial_context)
    return logger


# ==============================================
# Context Managers
# ==============================================


@contextmanager
def log_command_execution(command: str, **context):
    """
    Log a CLI subcommand with automatic timing.

    Emits command_start, then command_end with status and execution_time_ms.
    Exceptions are logged and re-raised.

    Yields:
        Logger bound with the command context
    """
    logger = get_logger(command, command=command, **context)

    start_time = time.perf_counter()
    logger.info("command_start")

    try:
        yield logger
        logger.info(
            "command_end",
            execution_time_ms=round((time.perf_counter() - start_time) * 1000, 2),
            status="success",
        )
    except Exception as e:
        logger.error(
            "command_end",
            execution_time_ms=round((time.perf_counter() - start_time) * 1000, 2),
            status="error",
            error_type=type(e).__name__,
            error_message=str(e),
        )
        raise


@contextmanager
def log_performance(logger: structlog.BoundLogger, operation: str, **extra_context):
    """
    Context manager for performance measurement.

    Example:
        with log_performance(logger, "curve_sweep", n_images=500):
            curve = miss_rate_curve(results, n_images=500)

        # Logs: {"event": "operation_complete", "operation": "curve_sweep",
        #        "duration_ms": 12.3, "n_images": 500}
    """
    start_time = time.perf_counter()
    try:
        yield
    finally:
        logger.debug(
            "operation_complete",
            operation=operation,
            duration_ms=round((time.perf_counter() - start_time) * 1000, 2),
            **extra_context,
        )

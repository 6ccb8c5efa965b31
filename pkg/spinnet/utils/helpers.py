"""
Utility functions and helpers.
"""
import logging
import math
import re
import sys
from datetime import datetime, timezone
from typing import Any, Dict, Optional

import structlog

from spinnet.core.config import settings


def _configure_structlog(fmt: str) -> None:
    renderer: Any
    if fmt == "console":
        renderer = structlog.dev.ConsoleRenderer(colors=False)
    else:
        renderer = structlog.processors.JSONRenderer()

    structlog.configure(
        processors=[
            structlog.stdlib.filter_by_level,
            structlog.stdlib.add_logger_name,
            structlog.stdlib.add_log_level,
            structlog.stdlib.PositionalArgumentsFormatter(),
            structlog.processors.TimeStamper(fmt="iso"),
            structlog.processors.StackInfoRenderer(),
            structlog.processors.format_exc_info,
            structlog.processors.UnicodeDecoder(),
            renderer,
        ],
        context_class=dict,
        logger_factory=structlog.stdlib.LoggerFactory(),
        wrapper_class=structlog.stdlib.BoundLogger,
        cache_logger_on_first_use=True,
    )


# Configure structured logging
_configure_structlog(settings.log_format)

logger = structlog.get_logger("spinnet")


_PI_EXPRESSION = re.compile(
    r"^\s*(?P<sign>[+-]?)\s*(?P<num>\d*\.?\d*)\s*\*?\s*pi\s*(?:/\s*(?P<den>\d*\.?\d+))?\s*$"
)


def parse_angle(text: str) -> float:
    """
    Parse a CLI angle into radians.

    Plain numbers are degrees; expressions containing ``pi`` are radians
    (``pi``, ``-pi/2``, ``3pi/2``, ``0.5*pi``).

    Args:
        text: Angle as typed on the command line

    Returns:
        Angle in radians

    Raises:
        ValueError: If the text is not a recognised angle
    """
    lowered = text.strip().lower()
    if "pi" not in lowered:
        return math.radians(float(lowered))

    match = _PI_EXPRESSION.match(lowered)
    if match is None:
        raise ValueError(f"Unrecognised angle expression: {text!r}")
    numerator = float(match.group("num")) if match.group("num") else 1.0
    denominator = float(match.group("den")) if match.group("den") else 1.0
    if denominator == 0:
        raise ValueError(f"Zero denominator in angle: {text!r}")
    value = numerator * math.pi / denominator
    return -value if match.group("sign") == "-" else value


def wrap_angle(theta: float) -> float:
    """Fold an angle into [0, 2*pi)."""
    wrapped = math.fmod(theta, 2.0 * math.pi)
    if wrapped < 0:
        wrapped += 2.0 * math.pi
    if wrapped >= 2.0 * math.pi:
        wrapped -= 2.0 * math.pi
    return wrapped


def circular_distance(a: float, b: float) -> float:
    """Smallest absolute difference between two angles, in radians."""
    d = wrap_angle(a - b)
    return min(d, 2.0 * math.pi - d)


def create_run_metadata(
    config: Dict[str, Any],
    rng_algorithm: str,
    additional_data: Optional[Dict[str, Any]] = None,
) -> Dict[str, Any]:
    """
    Create the metadata block attached to sweep results.

    Args:
        config: Echo of the run configuration
        rng_algorithm: Identifier of the random bit generator
        additional_data: Extra metadata to include

    Returns:
        Metadata dictionary
    """
    metadata: Dict[str, Any] = {
        "config": config,
        "seed": config.get("base_seed"),
        "rng_algorithm": rng_algorithm,
        "code_version": settings.app_version,
    }
    if additional_data:
        metadata.update(additional_data)
    return metadata


class SimulationLogger:
    """Structured logging utility for simulation runs."""

    @staticmethod
    def log_run_start(kind: str, **details: Any) -> None:
        """Log the start of a run."""
        logger.info(
            "run started",
            kind=kind,
            timestamp=datetime.now(timezone.utc).isoformat(),
            **details,
        )

    @staticmethod
    def log_run_complete(kind: str, elapsed: float, **details: Any) -> None:
        """Log a finished run."""
        logger.info(
            "run complete",
            kind=kind,
            elapsed_s=round(elapsed, 4),
            **details,
        )

    @staticmethod
    def log_progress(stage: str, done: int, total: int, **details: Any) -> None:
        """Log sweep progress."""
        logger.info("progress", stage=stage, done=done, total=total, **details)

    @staticmethod
    def log_error(error: str, details: Optional[Dict[str, Any]] = None) -> None:
        """Log a failure."""
        logger.error(
            "simulation error",
            error=error,
            details=details,
            timestamp=datetime.now(timezone.utc).isoformat(),
        )


def configure_logging(level: Optional[str] = None, fmt: Optional[str] = None) -> None:
    """
    Route structured logs to stderr at the requested level.

    Args:
        level: Log level name, defaults to settings.log_level
        fmt: "json" or "console", defaults to settings.log_format
    """
    level_name = (level or settings.log_level).upper()
    logging.basicConfig(
        stream=sys.stderr,
        format="%(message)s",
        level=getattr(logging, level_name, logging.INFO),
        force=True,
    )
    _configure_structlog(fmt or settings.log_format)

# app/core/error_handlers.py
"""Error rendering for the command-line front end.
Turns every exception into a consistent payload, logs it and picks the exit status.
"""

import json
import logging
import traceback
from typing import Any

import typer
from pydantic import ValidationError

from app.core.config import settings
from app.core.errors import EXIT_CONFIG, EXIT_INTERNAL, ConfigError, McnError

logger = logging.getLogger(__name__)


def validation_details(exc: ValidationError) -> list[dict[str, Any]]:
    """One entry per failing field: location, message and error type."""
    return [
        {
            "loc": ".".join(str(part) for part in err["loc"]),
            "msg": err["msg"],
            "type": err["type"],
        }
        for err in exc.errors()
    ]


def from_validation_error(exc: ValidationError, source: str = "config") -> ConfigError:
    """Map a pydantic ValidationError onto ConfigError."""
    details = validation_details(exc)
    json_errors = [d for d in details if d["type"] == "json_invalid"]
    if json_errors:
        return ConfigError("PARSE_ERROR", f"{source}: {json_errors[0]['msg']}", details)
    first = details[0] if details else {"loc": "", "msg": str(exc)}
    locus = f" at {first['loc']}" if first["loc"] else ""
    return ConfigError("CONFIG_ERROR", f"{source}{locus}: {first['msg']}", details)


def create_error_response(
    code: str,
    message: str,
    details: Any = None,
    traceback_str: str | None = None,
) -> dict[str, Any]:
    """Create a consistent error payload.

    Args:
        code: Application-specific error code
        message: Human-readable error message
        details: Additional error details
        traceback_str: Traceback string (only included in local environment)

    Returns:
        Dict with a single ``error`` entry

    """
    error_response: dict[str, Any] = {"error": {"code": code, "message": message}}

    if details is not None:
        error_response["error"]["details"] = details

    if settings.ENVIRONMENT == "local" and traceback_str and settings.LOG_LEVEL == "DEBUG":
        error_response["error"]["traceback"] = traceback_str.strip().split("\n")

    return error_response


def render_error(payload: dict[str, Any], output_format: str) -> str:
    if output_format == "structured":
        return json.dumps(payload, indent=2, sort_keys=True)
    error = payload["error"]
    lines = [f"error [{error['code']}]: {error['message']}"]
    details = error.get("details")
    if isinstance(details, list):
        for entry in details:
            if isinstance(entry, dict):
                lines.append("  - " + ", ".join(f"{k}={v}" for k, v in entry.items()))
            else:
                lines.append(f"  - {entry}")
    return "\n".join(lines)


def handle_exception(exc: Exception, output_format: str = "text") -> int:
    """Report an exception on stdout and return the exit status."""
    if isinstance(exc, ValidationError):
        exc = from_validation_error(exc)

    if isinstance(exc, McnError):
        logger.warning(f"{type(exc).__name__}: {exc.code} - {exc.message}")
        payload = create_error_response(exc.code, exc.message, exc.details)
        exit_code = exc.exit_code
    elif isinstance(exc, OSError):
        logger.warning(f"I/O error: {exc}")
        payload = create_error_response("IO_ERROR", str(exc))
        exit_code = EXIT_CONFIG
    else:
        logger.error(f"Unhandled exception: {exc}", exc_info=True)
        payload = create_error_response(
            "INTERNAL_ERROR", str(exc) or type(exc).__name__, traceback_str=traceback.format_exc()
        )
        exit_code = EXIT_INTERNAL

    typer.echo(render_error(payload, output_format))
    return exit_code

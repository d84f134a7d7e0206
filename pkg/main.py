"""MCN FDI Analyzer.

Command-line entry point. Decides fault detection and isolation solvability
for multi-hop control networks, cross-checks the structural verdicts
numerically and simulates the composed system.
"""

import logging
import sys
from typing import Annotated

import typer

from app.api import commands
from app.core.config import settings

cli = typer.Typer(
    name="mcn-fdi",
    help="Fault detection and isolation analysis for multi-hop control networks",
    no_args_is_help=True,
    add_completion=False,
)
cli.add_typer(commands.router)


def configure_logging(level: str) -> None:
    """Send logs to stderr so stdout carries reports only."""
    logging.basicConfig(
        level=getattr(logging, level),
        stream=sys.stderr,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        force=True,
    )


@cli.callback()
def main(
    log_level: Annotated[
        str | None, typer.Option("--log-level", help="DEBUG, INFO, WARNING or ERROR")
    ] = None,
) -> None:
    level = (log_level or settings.LOG_LEVEL).upper()
    if level not in getattr(logging, "getLevelNamesMapping", lambda: logging._nameToLevel)():
        raise typer.BadParameter(f"invalid log level: {log_level}")
    configure_logging(level)
    logging.getLogger(__name__).info(
        f"Starting {settings.APP_TITLE} v{settings.APP_VERSION} ({settings.ENVIRONMENT})"
    )


if __name__ == "__main__":
    cli()

"""Command dependencies.

Shared by every CLI command: config loading, scenario parsing and the
service instance a command works with.
"""

import logging
from pathlib import Path

from app.core.errors import Errors
from app.models.mcn import Mcn
from app.models.scenario import FaultScenario
from app.services.fdi import FdiService
from app.services.loader import load_mcn_file
from app.services.routing import make_scenario

logger = logging.getLogger(__name__)


def get_mcn(config: Path, *, strict: bool = True) -> Mcn:
    """Load and validate the config file named on the command line."""
    if not config.is_file():
        raise Errors.config_error(f"config file not found: {config}", {"path": str(config)})
    return load_mcn_file(config, strict=strict)


def get_fdi_service(mcn: Mcn) -> FdiService:
    """Get FDI service instance."""
    return FdiService(mcn)


def parse_fault_list(faults: str) -> list[str]:
    """Split ``--faults v2,v4`` into node ids."""
    names = [name.strip() for name in faults.split(",") if name.strip()]
    if not names:
        raise Errors.precondition("--faults needs at least one node id")
    return names


def get_scenario(mcn: Mcn, faults: str, *, assumption1: bool = True) -> FaultScenario:
    return make_scenario(mcn, parse_fault_list(faults), assumption1=assumption1)

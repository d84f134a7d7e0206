"""Error types for configuration, analysis and internal consistency failures.

Every error carries a stable code, a human-readable message, optional details
and the process exit status the CLI should return. Call sites use the
shortcut functions: ``raise unknown_node("v9", where="edge v9->v1")``.
"""

from typing import Any

EXIT_OK = 0
EXIT_UNSOLVABLE = 1
EXIT_CONFIG = 2
EXIT_INTERNAL = 3


class McnError(Exception):
    """Base error of the analyzer."""

    exit_code: int = EXIT_CONFIG

    def __init__(self, code: str, message: str, details: Any = None):
        super().__init__(message)
        self.code = code
        self.message = message
        self.details = details

    def to_dict(self) -> dict[str, Any]:
        payload: dict[str, Any] = {"code": self.code, "message": self.message}
        if self.details is not None:
            payload["details"] = self.details
        return payload


class ConfigError(McnError):
    """Rejected configuration document or network."""


class AnalysisError(McnError):
    """An analysis precondition does not hold."""


class InternalInconsistency(McnError):
    """Two results that must agree by construction do not."""

    exit_code = EXIT_INTERNAL


class Errors:
    """Error builders."""

    @staticmethod
    def config_error(message: str, details: Any = None) -> ConfigError:
        return ConfigError("CONFIG_ERROR", message, details)

    @staticmethod
    def parse_error(message: str, details: Any = None) -> ConfigError:
        return ConfigError("PARSE_ERROR", message, details)

    @staticmethod
    def dimension_mismatch(message: str) -> ConfigError:
        return ConfigError("DIMENSION_MISMATCH", f"dimension mismatch: {message}")

    @staticmethod
    def unknown_node(node: str, where: str | None = None) -> ConfigError:
        suffix = f" ({where})" if where else ""
        return ConfigError("UNKNOWN_NODE", f"unknown node '{node}'{suffix}", {"node": node})

    @staticmethod
    def link_scheduled_twice(edge: str, slots: list[int]) -> ConfigError:
        return ConfigError(
            "LINK_SCHEDULED_TWICE",
            f"link scheduled twice: {edge} in slots {slots}",
            {"edge": edge, "slots": slots},
        )

    @staticmethod
    def routing_violation(message: str, details: Any = None) -> ConfigError:
        return ConfigError("ROUTING_SHAPE", message, details)

    @staticmethod
    def unknown_fault_node(node: str) -> AnalysisError:
        return AnalysisError(
            "INVALID_FAULT_NODE", f"fault node not a valid candidate: '{node}'", {"node": node}
        )

    @staticmethod
    def no_path(source: str, sink: str, component: str | None = None) -> AnalysisError:
        where = f" in {component}" if component else ""
        return AnalysisError("NO_PATH", f"no path from '{source}' to '{sink}'{where}")

    @staticmethod
    def unscheduled_edge(edge: str) -> AnalysisError:
        return AnalysisError("UNSCHEDULED_EDGE", f"unscheduled edge on path: {edge}")

    @staticmethod
    def degenerate_cancellation(source: str, sink: str, component: str) -> AnalysisError:
        return AnalysisError(
            "DEGENERATE_CANCELLATION",
            f"degenerate cancellation: every coefficient from '{source}' to '{sink}' in "
            f"{component} is zero for the given weights",
        )

    @staticmethod
    def empty_gamma(node: str) -> AnalysisError:
        return AnalysisError("EMPTY_GAMMA", f"fault node '{node}' has no copy in any routing subgraph")

    @staticmethod
    def precondition(message: str) -> AnalysisError:
        return AnalysisError("PRECONDITION", message)

    @staticmethod
    def combinatorial_guard(count: int, cap: int) -> AnalysisError:
        return AnalysisError(
            "COMBINATORIAL_GUARD",
            f"{count} scenarios exceed the enumeration cap of {cap}",
            {"count": count, "cap": cap},
        )

    @staticmethod
    def ill_conditioned(attempts: int) -> AnalysisError:
        return AnalysisError(
            "ILL_CONDITIONED", f"no well-conditioned oracle draw after {attempts} attempts"
        )

    @staticmethod
    def inconsistency(code: str, message: str, details: Any = None) -> InternalInconsistency:
        return InternalInconsistency(code, message, details)


# Shortcuts for common errors
def config_error(message: str, details: Any = None) -> ConfigError:
    """Shortcut for a generic configuration error."""
    return Errors.config_error(message, details)


def unknown_node(node: str, where: str | None = None) -> ConfigError:
    """Shortcut for an undeclared node id."""
    return Errors.unknown_node(node, where)


def no_path(source: str, sink: str, component: str | None = None) -> AnalysisError:
    """Shortcut for a missing routing path."""
    return Errors.no_path(source, sink, component)


def precondition(message: str) -> AnalysisError:
    """Shortcut for a violated analysis precondition."""
    return Errors.precondition(message)


def inconsistency(code: str, message: str, details: Any = None) -> InternalInconsistency:
    """Shortcut for an internal inconsistency."""
    return Errors.inconsistency(code, message, details)

"""
Error Handler Module - Centralized error classification for fdqc.

Every failure that reaches the command line passes through here. Library
exceptions are matched by type first; anything else falls back to message
patterns. The result names the error type, the process exit code and a
solution hint.

Exit codes:
    0 success, 1 parse/usage/missing file, 2 protocol or other error,
    3 verification mismatch.
"""

import logging
import re
from typing import Any

from ..config import ConfigurationError
from ..exceptions import (
    FDQCError,
    GateError,
    PauliKeyError,
    ProgramParseError,
    ProtocolError,
    StateError,
    UsageError,
    VerificationMismatch,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PROTOCOL = 2
EXIT_MISMATCH = 3


class ErrorHandler:
    """
    Centralized error handling system for fdqc.
    Maps exceptions to exit codes and solution hints.
    """

    def __init__(self, config: dict[str, Any] | None = None):
        """
        Initialize the error handler with optional configuration.

        Parameters:
        - config: Optional configuration dictionary; ``error_rules`` and
          ``solution_templates`` replace the defaults when present
        """
        self.config = config or {}

        self._error_rules = self._load_error_rules()
        self._error_patterns = self._load_error_patterns()
        self._solution_templates = self._load_solution_templates()

    def _load_error_rules(self) -> list[dict[str, Any]]:
        """
        Ordered exception-type rules; the first isinstance match wins.
        """
        rules = self.config.get("error_rules", [])

        if not rules:
            rules = [
                {
                    "exception": ProgramParseError,
                    "type": "parse_error",
                    "exit_code": EXIT_USAGE,
                    "solution_type": "fix_program",
                },
                {
                    "exception": ConfigurationError,
                    "type": "configuration_error",
                    "exit_code": EXIT_USAGE,
                    "solution_type": "fix_config",
                },
                {
                    "exception": UsageError,
                    "type": "usage_error",
                    "exit_code": EXIT_USAGE,
                    "solution_type": "fix_usage",
                },
                {
                    "exception": FileNotFoundError,
                    "type": "missing_file",
                    "exit_code": EXIT_USAGE,
                    "solution_type": "create_file",
                },
                {
                    "exception": VerificationMismatch,
                    "type": "verification_mismatch",
                    "exit_code": EXIT_MISMATCH,
                    "solution_type": "inspect_mismatch",
                },
                {
                    "exception": ProtocolError,
                    "type": "protocol_error",
                    "exit_code": EXIT_PROTOCOL,
                    "solution_type": "inspect_protocol",
                },
                {
                    "exception": (StateError, GateError, PauliKeyError),
                    "type": "invalid_input",
                    "exit_code": EXIT_PROTOCOL,
                    "solution_type": "fix_value",
                },
                {
                    "exception": FDQCError,
                    "type": "fdqc_error",
                    "exit_code": EXIT_PROTOCOL,
                    "solution_type": "fix_value",
                },
            ]

        return rules

    def _load_error_patterns(self) -> list[dict[str, Any]]:
        """
        Message patterns for errors that are not fdqc exceptions.
        """
        return [
            {
                "pattern": r"No module named '([^']+)'",
                "type": "missing_dependency",
                "exit_code": EXIT_PROTOCOL,
                "extract": lambda m: {"package": m.group(1)},
                "solution_type": "install_dependency",
            },
            {
                "pattern": r"No such file or directory: '([^']+)'",
                "type": "missing_file",
                "exit_code": EXIT_USAGE,
                "extract": lambda m: {"file": m.group(1)},
                "solution_type": "create_file",
            },
        ]

    def _load_solution_templates(self) -> dict[str, dict[str, Any]]:
        templates = self.config.get("solution_templates", {})

        if not templates:
            templates = {
                "fix_program": {
                    "action": "fix_program",
                    "message": "Fix the program text: {error}",
                    "suggestion": (
                        "Start with 'qubits <N>' and use one of H, P, CZ, CNOT, T per line."
                    ),
                },
                "fix_config": {
                    "action": "fix_config",
                    "message": "Fix the configuration: {error}",
                    "suggestion": "Check config/default.yaml for valid sections and ranges.",
                },
                "fix_usage": {
                    "action": "fix_usage",
                    "message": "Invalid arguments: {error}",
                    "suggestion": "Run with --help to see the accepted flags.",
                },
                "create_file": {
                    "action": "create_file",
                    "message": "Missing file: {file}",
                    "suggestion": "Check the path passed on the command line.",
                },
                "inspect_mismatch": {
                    "action": "inspect_mismatch",
                    "message": "Delegated result disagrees with the reference: {error}",
                    "suggestion": "Compare the key-update table against the oracle sweep.",
                },
                "inspect_protocol": {
                    "action": "inspect_protocol",
                    "message": "Protocol violation: {error}",
                    "suggestion": "Check the round layout and message order.",
                },
                "fix_value": {
                    "action": "fix_value",
                    "message": "Invalid value: {error}",
                    "suggestion": "Review the input state, gate operands and keys.",
                },
                "install_dependency": {
                    "action": "install_dependency",
                    "message": "Install the missing dependency: {package}",
                    "command": "pip install {package}",
                },
            }

        return templates

    def classify(self, error: str | Exception) -> dict[str, Any] | None:
        """
        Find the rule or pattern matching ``error``.

        Returns:
        - {type, exit_code, solution_type, extracted} or None
        """
        error_str = str(error)

        if isinstance(error, BaseException):
            for rule in self._error_rules:
                if isinstance(error, rule["exception"]):
                    extracted = {"error": error_str}
                    if isinstance(error, ProgramParseError):
                        extracted["line"] = error.line_no
                    if isinstance(error, FileNotFoundError):
                        extracted["file"] = error.filename or error_str
                    return {
                        "type": rule["type"],
                        "exit_code": rule["exit_code"],
                        "solution_type": rule["solution_type"],
                        "extracted": extracted,
                    }

        for pattern in self._error_patterns:
            match = re.search(pattern["pattern"], error_str)
            if match:
                return {
                    "type": pattern["type"],
                    "exit_code": pattern["exit_code"],
                    "solution_type": pattern["solution_type"],
                    "extracted": {"error": error_str, **pattern["extract"](match)},
                }

        return None

    def handle_error(self, error: str | Exception) -> dict[str, Any]:
        """
        Classify an error and build its solution.

        Parameters:
        - error: Error to handle (string or exception)

        Returns:
        - {success, type, exit_code, message, error, solution}; unknown errors
          get exit code 2 and no solution
        """
        error_str = str(error)
        logger.debug(f"Handling error: {error_str}")

        error_info = self.classify(error)
        if error_info is None:
            logger.warning(f"No matching rule found for error: {error_str}")
            return {
                "success": False,
                "type": "unknown",
                "exit_code": EXIT_PROTOCOL,
                "message": error_str,
                "error": error_str,
                "solution": None,
            }

        template = self._solution_templates.get(error_info["solution_type"])
        solution = self._apply_template(template, error_info) if template else None

        return {
            "success": True,
            "type": error_info["type"],
            "exit_code": error_info["exit_code"],
            "message": solution["message"] if solution else error_str,
            "error": error_str,
            "solution": solution,
        }

    def _apply_template(
        self, template: dict[str, Any], error_info: dict[str, Any]
    ) -> dict[str, Any]:
        solution = template.copy()
        values = error_info.get("extracted", {})
        for key in ("message", "suggestion", "command"):
            if key in solution:
                try:
                    solution[key] = solution[key].format(**values)
                except KeyError:
                    logger.debug(f"Template field missing for {template['action']}.{key}")
        return solution


# Singleton instance
error_handler = ErrorHandler()


def handle_error(error: str | Exception) -> dict[str, Any]:
    """
    Classify an error with the shared handler.

    Parameters:
    - error: Error to handle (string or exception)

    Returns:
    - Error handling result
    """
    return error_handler.handle_error(error)

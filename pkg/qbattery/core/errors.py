# qbattery/core/errors.py

from typing import Any, Mapping, Optional

from pydantic import ValidationError

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_SOLVER = 3
EXIT_VERIFY = 4


class QBatteryError(Exception):
    """Base error; carries the process exit code the CLI should return"""

    exit_code = EXIT_SOLVER

    def __init__(self, message: str, exit_code: Optional[int] = None):
        super().__init__(message)
        self.message = message
        if exit_code is not None:
            self.exit_code = exit_code


class ConfigError(QBatteryError):
    exit_code = EXIT_CONFIG

    @classmethod
    def from_validation(
        cls,
        exc: ValidationError,
        source: str = "",
        field_names: Optional[Mapping[str, str]] = None,
    ) -> "ConfigError":
        """Name every offending field of a pydantic validation failure.

        field_names maps model attributes back to the keys the user wrote.
        """
        names = field_names or {}
        problems = []
        for err in exc.errors():
            parts = [names.get(str(part), str(part)) for part in err["loc"]]
            field = ".".join(parts) or "<root>"
            problems.append(f"{field}: {err['msg']}")
        prefix = f"{source}: " if source else ""
        return cls(prefix + "; ".join(problems))


class SolverError(QBatteryError):
    exit_code = EXIT_SOLVER


class ConvergenceError(SolverError):
    def __init__(self, message: str, residuals: Any = None):
        super().__init__(message)
        self.residuals = residuals


class DegenerateRootsError(SolverError):
    pass


class StepSizeError(SolverError):
    pass


class ConservationError(SolverError):
    pass


class VerificationError(QBatteryError):
    exit_code = EXIT_VERIFY

    def __init__(self, message: str, report: Any = None):
        super().__init__(message)
        self.report = report

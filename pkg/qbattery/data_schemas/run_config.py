# qbattery/data_schemas/run_config.py

import hashlib
import json
from pathlib import Path
from typing import Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from qbattery.core.errors import ConfigError
from qbattery.core.params import normalize_initial, validate_params
from qbattery.models import (
    InitialState,
    KernelMode,
    SolutionMode,
    SystemParams,
    TimeGrid,
)

# model attribute -> config key, for error messages
DOMAIN_FIELD_NAMES = {
    "omega0": "omega0_over_lambda",
    "gamma": "gamma_over_lambda",
    "d_coupling": "D_over_lambda",
    "delta": "Delta_over_lambda",
    "t_max": "t_max_lambda",
}


class ComplexValue(BaseModel):
    model_config = ConfigDict(extra="forbid")

    re: float = Field(default=0.0, allow_inf_nan=False)
    im: float = Field(default=0.0, allow_inf_nan=False)

    @classmethod
    def of(cls, z: complex) -> "ComplexValue":
        return cls(re=z.real, im=z.imag)

    def to_complex(self) -> complex:
        return complex(self.re, self.im)


class RunConfig(BaseModel):
    """A single run as written in the JSON config; defaults are the Markovian resting case"""

    model_config = ConfigDict(extra="forbid")

    omega0_over_lambda: float = 1.5e9
    gamma_over_lambda: float = 0.1
    D_over_lambda: float = 0.3
    Delta_over_lambda: float = 0.0
    beta: float = 0.0
    kernel_mode: KernelMode = KernelMode.CONSISTENT
    solution_mode: SolutionMode = SolutionMode.TWO_BRANCH
    c1_0: ComplexValue = ComplexValue(re=1.0, im=0.0)
    c2_0: ComplexValue = ComplexValue(re=0.0, im=0.0)
    t_max_lambda: float = 30.0
    n_steps: int = 6000

    def with_overrides(
        self,
        solution_mode: Optional[SolutionMode] = None,
        kernel_mode: Optional[KernelMode] = None,
        **values: float,
    ) -> "RunConfig":
        """Copy with CLI flags or sweep values applied, re-validated"""
        data = self.model_dump()
        if solution_mode is not None:
            data["solution_mode"] = SolutionMode(solution_mode)
        if kernel_mode is not None:
            data["kernel_mode"] = KernelMode(kernel_mode)
        data.update(values)
        try:
            return RunConfig.model_validate(data)
        except ValidationError as e:
            raise ConfigError.from_validation(e, "invalid run configuration") from e

    def to_params(self) -> SystemParams:
        try:
            return validate_params(
                {
                    "omega0": self.omega0_over_lambda,
                    "gamma": self.gamma_over_lambda,
                    "d_coupling": self.D_over_lambda,
                    "delta": self.Delta_over_lambda,
                    "beta": self.beta,
                    "kernel_mode": self.kernel_mode,
                    "solution_mode": self.solution_mode,
                }
            )
        except ConfigError as e:
            cause = e.__cause__
            if isinstance(cause, ValidationError):
                raise ConfigError.from_validation(
                    cause, "invalid system parameters", DOMAIN_FIELD_NAMES
                ) from cause
            raise

    def to_grid(self) -> TimeGrid:
        try:
            return TimeGrid(t_max=self.t_max_lambda, n_steps=self.n_steps)
        except ValidationError as e:
            raise ConfigError.from_validation(
                e, "invalid grid", DOMAIN_FIELD_NAMES
            ) from e

    def to_domain(self) -> Tuple[SystemParams, InitialState, TimeGrid]:
        """Validated (SystemParams, InitialState, TimeGrid) triple"""
        params = self.to_params()
        init = normalize_initial(self.c1_0.to_complex(), self.c2_0.to_complex())
        return params, init, self.to_grid()

    def canonical_bytes(self) -> bytes:
        """Sorted-key compact JSON of every resolved value"""
        return json.dumps(
            self.model_dump(mode="json"), sort_keys=True, separators=(",", ":")
        ).encode("utf-8")

    def digest(self) -> str:
        return hashlib.sha256(self.canonical_bytes()).hexdigest()


def read_json_document(path: Union[str, Path]) -> str:
    path = Path(path)
    try:
        return path.read_text(encoding="utf-8")
    except FileNotFoundError as e:
        raise ConfigError(f"config file not found: {path}") from e
    except OSError as e:
        raise ConfigError(f"cannot read config file {path}: {e}") from e


def load_run_config(path: Union[str, Path]) -> RunConfig:
    """Parse and validate a run config; every failure is a ConfigError"""
    text = read_json_document(path)
    try:
        return RunConfig.model_validate_json(text)
    except ValidationError as e:
        raise ConfigError.from_validation(e, str(path)) from e

# qbattery/data_schemas/run_manifest.py

import json
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

from pydantic import BaseModel

from qbattery.core.config import TOOL_VERSION
from qbattery.data_schemas.run_config import ComplexValue
from qbattery.models import (
    AmplitudeTrajectory,
    InitialState,
    KernelMode,
    SolutionMode,
    SystemParams,
    TimeGrid,
)


class RunManifest(BaseModel):
    """Provenance record written beside every trajectory CSV"""

    params: SystemParams
    initial_state: Dict[str, ComplexValue]
    grid: TimeGrid
    kernel_mode: KernelMode
    solution_mode: SolutionMode
    solver: str
    tool_version: str = TOOL_VERSION
    config_digest: str
    warnings: List[str] = []

    @classmethod
    def build(
        cls,
        params: SystemParams,
        init: InitialState,
        grid: TimeGrid,
        traj: AmplitudeTrajectory,
        config_digest: str,
    ) -> "RunManifest":
        return cls(
            params=params,
            initial_state={
                "c1_0": ComplexValue.of(init.c1_0),
                "c2_0": ComplexValue.of(init.c2_0),
            },
            grid=grid,
            kernel_mode=params.kernel_mode,
            solution_mode=params.solution_mode,
            solver=traj.solver,
            config_digest=config_digest,
            warnings=list(traj.warnings),
        )

    def to_bytes(self) -> bytes:
        return (
            json.dumps(self.model_dump(mode="json"), sort_keys=True, indent=2) + "\n"
        ).encode("utf-8")

    def write(self, path: Union[str, Path]) -> Path:
        path = Path(path)
        path.write_bytes(self.to_bytes())
        return path


def manifest_path_for(csv_path: Union[str, Path]) -> Path:
    """out/run.csv -> out/run.manifest.json"""
    csv_path = Path(csv_path)
    return csv_path.with_name(csv_path.stem + ".manifest.json")


class SolverComparison(BaseModel):
    """Discrepancy of one solver against the closed form on |c1| and |c2|"""

    solver: str
    linf_c1: float
    linf_c2: float
    l2_c1: float
    l2_c2: float
    worst_points: List[Tuple[float, float]] = []

    @property
    def linf(self) -> float:
        return max(self.linf_c1, self.linf_c2)


class VerificationReport(BaseModel):
    """Outcome of the closed-form vs. reference-solver comparison"""

    config_digest: str
    tolerance: float
    passed: bool
    comparisons: List[SolverComparison]
    paper_literal_deviation: Optional[float] = None
    bath_coverage: Optional[float] = None
    cavity_transit: Optional[float] = None
    excitation_drift: Optional[float] = None
    warnings: List[str] = []

    def to_bytes(self) -> bytes:
        return (
            json.dumps(self.model_dump(mode="json"), sort_keys=True, indent=2) + "\n"
        ).encode("utf-8")

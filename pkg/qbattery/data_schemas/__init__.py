from .run_config import ComplexValue, RunConfig, load_run_config
from .sweep_spec import SweepPoint, SweepSpec, load_sweep_spec
from .run_manifest import (
    RunManifest,
    SolverComparison,
    VerificationReport,
    manifest_path_for,
)

__all__ = [
    "ComplexValue",
    "RunConfig",
    "load_run_config",
    "SweepPoint",
    "SweepSpec",
    "load_sweep_spec",
    "RunManifest",
    "SolverComparison",
    "VerificationReport",
    "manifest_path_for",
]

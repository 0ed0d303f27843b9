# qbattery/services/run_service.py

import asyncio
import logging
from pathlib import Path
from typing import List, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict

from qbattery.core.config import Settings
from qbattery.core.csv_writer import write_table_csv, write_trajectory_csv
from qbattery.core.errors import VerificationError
from qbattery.core.svg_plot import LinePlot, Panel, Series
from qbattery.data_schemas import (
    RunConfig,
    RunManifest,
    SolverComparison,
    VerificationReport,
    load_run_config,
    load_sweep_spec,
    manifest_path_for,
)
from qbattery.data_schemas.sweep_spec import format_sweep_value
from qbattery.models import (
    AmplitudeTrajectory,
    InitialState,
    KernelMode,
    ObservableTrajectory,
    SolutionMode,
    SystemParams,
    TimeGrid,
)
from qbattery.services.closed_form import ClosedFormSolver
from qbattery.services.figures import FigureSpec, get_figure
from qbattery.services.observables import (
    TrajectorySummary,
    observables_from_trajectory,
    summarize,
)
from qbattery.services.oracle import DiscreteModeSolver, VolterraSolver

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]
WORST_POINTS = 5


class PointResult(BaseModel):
    """A solved configuration; files are set once written"""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    config: RunConfig
    params: SystemParams
    initial: InitialState
    grid: TimeGrid
    trajectory: AmplitudeTrajectory
    observables: ObservableTrajectory
    csv_path: Optional[Path] = None

    def summary(self) -> TrajectorySummary:
        return summarize(self.observables)


def compare_trajectories(
    reference: AmplitudeTrajectory, other: AmplitudeTrajectory
) -> SolverComparison:
    """L-infinity and time-integrated L2 distances of |c1| and |c2|"""
    d1 = np.abs(np.abs(other.c1) - np.abs(reference.c1))
    d2 = np.abs(np.abs(other.c2) - np.abs(reference.c2))
    h = float(reference.t[1] - reference.t[0]) if reference.t.size > 1 else 1.0
    worst = np.maximum(d1, d2)
    # stable sort keeps the earliest point first among ties
    order = np.argsort(-worst, kind="stable")[:WORST_POINTS]
    return SolverComparison(
        solver=other.solver,
        linf_c1=float(d1.max()),
        linf_c2=float(d2.max()),
        l2_c1=float(np.sqrt(h * np.sum(d1 * d1))),
        l2_c2=float(np.sqrt(h * np.sum(d2 * d2))),
        worst_points=[(float(reference.t[i]), float(worst[i])) for i in order],
    )


class RunService:
    def __init__(
        self,
        closed_form: ClosedFormSolver,
        volterra: VolterraSolver,
        discrete: DiscreteModeSolver,
        settings: Settings,
    ):
        self.closed_form = closed_form
        self.volterra = volterra
        self.discrete = discrete
        self.settings = settings

    def solve_point(self, config: RunConfig) -> PointResult:
        params, init, grid = config.to_domain()
        traj = self.closed_form.solve(params, init, grid)
        for warning in traj.warnings:
            logger.warning(warning)
        return PointResult(
            config=config,
            params=params,
            initial=init,
            grid=grid,
            trajectory=traj,
            observables=observables_from_trajectory(traj, init),
        )

    def write_point(self, config: RunConfig, csv_path: PathLike) -> PointResult:
        """Solve and write the trajectory CSV plus its manifest"""
        result = self.solve_point(config)
        csv_path = write_trajectory_csv(csv_path, result.trajectory, result.observables)
        RunManifest.build(
            result.params,
            result.initial,
            result.grid,
            result.trajectory,
            config.digest(),
        ).write(manifest_path_for(csv_path))
        result.csv_path = csv_path
        logger.info(f"Wrote {csv_path}")
        return result

    def run_single(
        self,
        config_path: PathLike,
        out_path: PathLike,
        solution_mode: Optional[SolutionMode] = None,
        kernel_mode: Optional[KernelMode] = None,
    ) -> PointResult:
        config = load_run_config(config_path).with_overrides(solution_mode, kernel_mode)
        return self.write_point(config, out_path)

    async def _write_concurrently(
        self, jobs: List[Tuple[RunConfig, Path]]
    ) -> List[PointResult]:
        """Blocking solves in worker threads, capped by the settings; results keep job order"""
        semaphore = asyncio.Semaphore(self.settings.worker_count())

        async def run_job(config: RunConfig, path: Path) -> PointResult:
            async with semaphore:
                return await asyncio.to_thread(self.write_point, config, path)

        return list(await asyncio.gather(*(run_job(c, p) for c, p in jobs)))

    async def run_sweep(
        self,
        sweep_path: PathLike,
        out_dir: PathLike,
        solution_mode: Optional[SolutionMode] = None,
        kernel_mode: Optional[KernelMode] = None,
    ) -> Path:
        """One CSV per point plus index.csv of late-time means; returns the index path"""
        spec = load_sweep_spec(sweep_path)
        out_dir = Path(out_dir)
        points = spec.points()
        logger.info(
            f"Sweep over {', '.join(spec.names)}: {len(points)} points into {out_dir}"
        )

        jobs = [
            (
                point.config.with_overrides(solution_mode, kernel_mode),
                out_dir / f"{point.stem}.csv",
            )
            for point in points
        ]
        results = await self._write_concurrently(jobs)

        header = [
            "point",
            *spec.names,
            "file",
            "late_mean_dE_B",
            "late_mean_W",
            "late_mean_eta",
            "max_dE_B",
        ]
        rows = []
        for point, result in zip(points, results):
            summary = result.summary()
            rows.append(
                [
                    point.index,
                    *(format_sweep_value(v) for v in point.assignments.values()),
                    result.csv_path.name if result.csv_path else "",
                    summary.late_mean_dE_B,
                    summary.late_mean_W,
                    summary.late_mean_eta,
                    summary.max_dE_B,
                ]
            )
        return write_table_csv(out_dir / "index.csv", header, rows)

    def run_verify(
        self,
        config_path: PathLike,
        out_path: Optional[PathLike] = None,
        solution_mode: Optional[SolutionMode] = None,
        kernel_mode: Optional[KernelMode] = None,
    ) -> VerificationReport:
        """
        Closed form (two-branch) against the Volterra solver, plus the discrete-mode
        solver when omega0 is small enough. Raises VerificationError when the
        Volterra L-infinity distance exceeds the tolerance; the report is written first.
        """
        config = load_run_config(config_path).with_overrides(solution_mode, kernel_mode)
        params, init, grid = config.to_domain()
        exact = params.model_copy(update={"solution_mode": SolutionMode.TWO_BRANCH})
        literal = params.model_copy(update={"solution_mode": SolutionMode.PAPER_LITERAL})
        tolerance = self.settings.VERIFY_TOLERANCE

        reference = self.closed_form.solve(exact, init, grid)
        comparisons = [compare_trajectories(reference, self.volterra.solve(exact, init, grid))]
        deviation = compare_trajectories(
            reference, self.closed_form.solve(literal, init, grid)
        ).linf

        coverage = transit = drift = None
        if params.omega0 <= self.settings.DISCRETE_OMEGA0_LIMIT:
            bath = self.discrete.bath_for(exact)
            discrete = self.discrete.solve(exact, init, grid)
            comparisons.append(compare_trajectories(reference, discrete))
            coverage, transit = bath.coverage, bath.gamma_cavity
            drift = discrete.excitation_drift
        else:
            logger.info(
                f"Skipping the discrete-mode solver: omega0={params.omega0:g} > "
                f"{self.settings.DISCRETE_OMEGA0_LIMIT:g}"
            )

        passed = comparisons[0].linf <= tolerance
        report = VerificationReport(
            config_digest=config.digest(),
            tolerance=tolerance,
            passed=passed,
            comparisons=comparisons,
            paper_literal_deviation=deviation,
            bath_coverage=coverage,
            cavity_transit=transit,
            excitation_drift=drift,
            warnings=list(reference.warnings),
        )
        if out_path is not None:
            Path(out_path).parent.mkdir(parents=True, exist_ok=True)
            Path(out_path).write_bytes(report.to_bytes())

        for cmp in comparisons:
            logger.info(
                f"{cmp.solver}: Linf |c1|={cmp.linf_c1:.3g}, |c2|={cmp.linf_c2:.3g}"
            )
        if not passed:
            worst = ", ".join(f"t={t:g}: {d:.3g}" for t, d in comparisons[0].worst_points)
            raise VerificationError(
                f"closed form vs volterra Linf {comparisons[0].linf:.3g} exceeds "
                f"{tolerance:g} (worst points {worst})",
                report,
            )
        return report

    def _figure_plot(self, figure: FigureSpec, results: List[PointResult]) -> LinePlot:
        series = []
        for curve in figure.curves:
            for beta, result in zip(figure.betas, results):
                obs = result.observables
                if curve.quantity == "abs_dE_A":
                    y = np.abs(obs.dE_A)
                else:
                    y = getattr(obs, curve.quantity)
                series.append(
                    Series(
                        label=f"{curve.label}, β={beta:g}",
                        x=obs.t,
                        y=y,
                        dashed=curve.dashed,
                    )
                )
        panel = Panel(title=figure.title, series=series)
        return LinePlot([panel], x_label="λt", y_label=figure.y_label, y_range=figure.y_range)

    async def run_figure(
        self,
        figure_id: str,
        out_dir: PathLike,
        delta_fig2_caption: bool = False,
        t_max: Optional[float] = None,
        solution_mode: Optional[SolutionMode] = None,
        kernel_mode: Optional[KernelMode] = None,
    ) -> Path:
        """One CSV per curve velocity and <figure_id>.svg; returns the SVG path"""
        figure = get_figure(figure_id)
        out_dir = Path(out_dir)
        base = RunConfig().with_overrides(solution_mode, kernel_mode)
        configs = figure.configs(base, delta_fig2_caption=delta_fig2_caption, t_max=t_max)
        logger.info(f"Figure {figure_id}: {len(configs)} curves into {out_dir}")

        jobs = [
            (config, out_dir / f"{figure_id}_beta={format_sweep_value(config.beta)}.csv")
            for config in configs
        ]
        results = await self._write_concurrently(jobs)
        return self._figure_plot(figure, results).write(out_dir / f"{figure_id}.svg")

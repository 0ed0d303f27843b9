from typing import Optional

from qbattery.core.config import TOOL_VERSION, Settings, settings as default_settings
from qbattery.services.closed_form import ClosedFormSolver
from qbattery.services.oracle import DiscreteModeSolver, VolterraSolver
from qbattery.services.run_service import RunService

__version__ = TOOL_VERSION


def create_runner(settings: Optional[Settings] = None) -> RunService:
    # Wire the solvers from the process settings
    settings = settings or default_settings

    return RunService(
        closed_form=ClosedFormSolver(),
        volterra=VolterraSolver(max_step=settings.VOLTERRA_MAX_STEP),
        discrete=DiscreteModeSolver(
            n_modes=settings.BATH_MODES,
            half_width=settings.BATH_HALF_WIDTH,
            gamma_cavity=settings.CAVITY_TRANSIT,
            omega0_limit=settings.DISCRETE_OMEGA0_LIMIT,
        ),
        settings=settings,
    )

# qbattery/services/observables.py

"""
Figures of merit of the charging process. Energies are in units of omega0, so a
fully excited qubit stores 1 and a single-excitation state lives in [-1, 1].
"""

import logging
from typing import Optional, Sequence

import numpy as np
from pydantic import BaseModel

from qbattery.models import AmplitudeTrajectory, InitialState, ObservableTrajectory

logger = logging.getLogger(__name__)

POPULATION_SUM_TOLERANCE = 1e-9
EMPTY_BATTERY_THRESHOLD = 1e-12


def stored_energy(p_t, p_0):
    """Change of internal energy p(t) - p(0)"""
    return p_t - p_0


def ergotropy_qubit(p_excited):
    """(2p - 1) * H(p - 1/2), with H(0) = 1/2; scalar or array"""
    p = np.asarray(p_excited, dtype=float)
    # + 0.0 turns the -0.0 of passive states into 0.0
    value = (2.0 * p - 1.0) * np.heaviside(p - 0.5, 0.5) + 0.0
    return float(value) if value.ndim == 0 else value


def reduced_density_matrix(p_excited: float) -> np.ndarray:
    """diag(p, 1 - p) in the {|e>, |g>} basis"""
    return np.diag([p_excited, 1.0 - p_excited]).astype(complex)


def _check_populations(populations: Sequence[float], energies: Sequence[float]):
    pops = np.asarray(populations, dtype=float)
    levels = np.asarray(energies, dtype=float)
    if pops.shape != levels.shape or pops.ndim != 1:
        raise ValueError("populations and energies must be 1-D sequences of one length")
    if abs(pops.sum() - 1.0) > POPULATION_SUM_TOLERANCE:
        raise ValueError(f"populations sum to {pops.sum()!r}, not 1")
    return pops, levels


def passive_energy(populations: Sequence[float], energies: Sequence[float]) -> float:
    """Tr(sigma H) of the passive state: populations descending against energies ascending"""
    pops, levels = _check_populations(populations, energies)
    return float(np.sort(pops)[::-1] @ np.sort(levels))


def ergotropy_general(populations: Sequence[float], energies: Sequence[float]) -> float:
    """
    Ergotropy of a state diagonal in the energy eigenbasis: Tr(rho H) - Tr(sigma H).
    """
    pops, levels = _check_populations(populations, energies)
    work = float(pops @ levels) - passive_energy(pops, levels)
    return max(work, 0.0)


def efficiency(W: float, dE_B: float) -> Optional[float]:
    """W / dE_B, or None while the battery holds no energy"""
    if dE_B > EMPTY_BATTERY_THRESHOLD:
        return W / dE_B
    return None


def observables_from_trajectory(
    traj: AmplitudeTrajectory, init: InitialState
) -> ObservableTrajectory:
    p_charger, p_battery = traj.populations()
    dE_A = stored_energy(p_charger, init.p_charger)
    dE_B = stored_energy(p_battery, init.p_battery)
    W = ergotropy_qubit(p_battery)
    W_A = ergotropy_qubit(p_charger)

    defined = dE_B > EMPTY_BATTERY_THRESHOLD
    eta = np.divide(W, dE_B, out=np.full_like(dE_B, np.nan), where=defined)

    return ObservableTrajectory(
        t=traj.t,
        p_charger=p_charger,
        p_battery=p_battery,
        dE_A=dE_A,
        dE_B=dE_B,
        W=W,
        W_A=W_A,
        eta=eta,
    )


class TrajectorySummary(BaseModel):
    """Late-time figures of merit of one run, as listed in sweep indices"""

    late_mean_dE_B: float
    late_mean_W: float
    late_mean_eta: Optional[float] = None
    max_dE_B: float


def summarize(obs: ObservableTrajectory, late_fraction: float = 1.0 / 3.0) -> TrajectorySummary:
    """Means over the last late_fraction of the time window, plus the peak stored energy"""
    if not 0 < late_fraction <= 1:
        raise ValueError("late_fraction must lie in (0, 1]")
    t_start = obs.t[-1] * (1.0 - late_fraction)
    late = obs.t >= t_start - 1e-12

    eta_late = obs.eta[late]
    eta_late = eta_late[~np.isnan(eta_late)]

    return TrajectorySummary(
        late_mean_dE_B=float(np.mean(obs.dE_B[late])),
        late_mean_W=float(np.mean(obs.W[late])),
        late_mean_eta=float(np.mean(eta_late)) if eta_late.size else None,
        max_dE_B=float(np.max(obs.dE_B)),
    )

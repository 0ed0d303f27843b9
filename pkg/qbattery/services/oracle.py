# qbattery/services/oracle.py

"""
Brute-force reference solvers for the two-qubit amplitudes.

solve_volterra integrates the reduced integro-differential pair

    dc1/dt = -iD c2 - int_0^t F(t - t') c1(t') dt'
    dc2/dt = -iD c1 - int_0^t F(t - t') c2(t') dt'

with the stationary kernel F(tau) = g0 cosh(a tau) exp(-b tau).

solve_discrete_modes integrates the single-excitation Schrodinger equation of
both qubits coupled to a finite set of cavity modes, with the position-dependent
couplings g_k sin(w_k (beta t - Gamma)) left in place.
"""

import logging
import math
from typing import Optional

import numpy as np

from qbattery.core.config import settings
from qbattery.core.errors import ConfigError, ConservationError, StepSizeError
from qbattery.core.params import kernel_from_params
from qbattery.models import (
    AmplitudeTrajectory,
    DiscreteBath,
    InitialState,
    KernelSpec,
    SystemParams,
    TimeGrid,
)

logger = logging.getLogger(__name__)

STEP_CHECK_STEPS = 10
STEP_CHECK_TOLERANCE = 1e-4
CONSERVATION_TOLERANCE = 1e-4
RK4_PHASE_PER_STEP = 0.05
MIN_BATH_MODES = 400


def kernel_time_domain(k: KernelSpec, tau):
    """F(tau) = g0 cosh(a tau) exp(-b tau) for tau >= 0; scalar or array"""
    tau_arr = np.asarray(tau, dtype=float)
    if np.any(tau_arr < 0):
        raise ValueError("the memory kernel is only defined for tau >= 0")
    value = k.g0 * np.cosh(k.a * tau_arr) * np.exp(-k.b * tau_arr)
    return complex(value) if tau_arr.ndim == 0 else value


def _volterra_march(
    kernel: np.ndarray, d_coupling: float, y0: np.ndarray, h: float, n: int
) -> np.ndarray:
    """
    Product-trapezoid march with one Heun predictor-corrector pass per step.

    kernel holds F(j h) for j = 0..n; y0 is (c1, c2). Returns an (n + 1, 2) array.
    """
    y = np.zeros((n + 1, 2), dtype=complex)
    y[0] = y0
    half_f0 = 0.5 * h * kernel[0]

    def rhs(state: np.ndarray, hist: np.ndarray) -> np.ndarray:
        return -1j * d_coupling * state[::-1] - hist - half_f0 * state

    f_n = -1j * d_coupling * y0[::-1]
    for i in range(n):
        # trapezoid weights of the memory integral at t_{i+1}, minus the unknown endpoint
        hist = h * (0.5 * kernel[i + 1] * y[0] + kernel[i:0:-1] @ y[1 : i + 1])
        pred = y[i] + h * f_n
        y[i + 1] = y[i] + 0.5 * h * (f_n + rhs(pred, hist))
        f_n = rhs(y[i + 1], hist)
    return y


def _check_step_size(k: KernelSpec, d_coupling: float, y0: np.ndarray, h: float):
    coarse = _volterra_march(
        kernel_time_domain(k, h * np.arange(STEP_CHECK_STEPS + 1)),
        d_coupling,
        y0,
        h,
        STEP_CHECK_STEPS,
    )
    fine = _volterra_march(
        kernel_time_domain(k, 0.5 * h * np.arange(2 * STEP_CHECK_STEPS + 1)),
        d_coupling,
        y0,
        0.5 * h,
        2 * STEP_CHECK_STEPS,
    )
    error = float(np.max(np.abs(coarse - fine[::2])))
    if error > STEP_CHECK_TOLERANCE:
        logger.error(f"Volterra step {h:.3g} rejected, h vs h/2 difference {error:.3g}")
        raise StepSizeError(
            f"Volterra step h={h:.3g} too coarse: h vs h/2 difference {error:.3g} "
            f"over the first {STEP_CHECK_STEPS} steps exceeds {STEP_CHECK_TOLERANCE:g}"
        )
    return error


def solve_volterra(
    p: SystemParams,
    init: InitialState,
    grid: TimeGrid,
    max_step: Optional[float] = None,
) -> AmplitudeTrajectory:
    """
    Second-order Volterra solution sampled on grid.

    When the grid step exceeds max_step the march runs on a refined grid whose
    step divides the output step.
    """
    k = kernel_from_params(p)
    h_out = grid.step
    sub = 1
    if max_step is not None and h_out > max_step:
        sub = math.ceil(h_out / max_step - 1e-9)
    h = h_out / sub
    n = grid.n_steps * sub

    y0 = np.array([init.c1_0, init.c2_0], dtype=complex)
    _check_step_size(k, p.d_coupling, y0, h)

    kernel = kernel_time_domain(k, h * np.arange(n + 1))
    y = _volterra_march(kernel, p.d_coupling, y0, h, n)[::sub]

    return AmplitudeTrajectory(
        t=grid.points(),
        c1=y[:, 0].copy(),
        c2=y[:, 1].copy(),
        solver="volterra",
    )


def discretize_bath(
    p: SystemParams,
    n_modes: Optional[int] = None,
    half_width: Optional[float] = None,
    gamma_cavity: Optional[float] = None,
) -> DiscreteBath:
    """Bath sampling with the process settings filling any unset argument"""
    try:
        bath = DiscreteBath.from_params(
            p,
            n_modes=settings.BATH_MODES if n_modes is None else n_modes,
            half_width=settings.BATH_HALF_WIDTH if half_width is None else half_width,
            gamma_cavity=settings.CAVITY_TRANSIT if gamma_cavity is None else gamma_cavity,
        )
    except ValueError as e:
        raise ConfigError(f"invalid bath discretisation: {e}") from e
    logger.debug(
        f"Discrete bath: {bath.n_modes} modes, spacing {bath.spacing:.4g}, "
        f"coverage {bath.coverage:.4f}"
    )
    return bath


def _rk4_substeps(p: SystemParams, bath: DiscreteBath, h_out: float) -> int:
    w = bath.frequencies
    max_freq = float(np.max(np.abs(p.omega0 - w)) + np.max(np.abs(w)) * p.beta)
    max_freq = max(max_freq, p.d_coupling, 1.0)
    return max(1, math.ceil(h_out * max_freq / RK4_PHASE_PER_STEP))


def solve_discrete_modes(
    p: SystemParams,
    bath: DiscreteBath,
    init: InitialState,
    grid: TimeGrid,
    omega0_limit: Optional[float] = None,
) -> AmplitudeTrajectory:
    """
    Fixed-step RK4 on (c1, c2, d_k, d'_k) in the interaction picture.

    The total excitation is checked at every output sample; a drift beyond
    CONSERVATION_TOLERANCE aborts with ConservationError.
    """
    if omega0_limit is None:
        omega0_limit = settings.DISCRETE_OMEGA0_LIMIT
    if p.omega0 > omega0_limit:
        logger.warning(
            f"omega0={p.omega0:g} exceeds {omega0_limit:g}; "
            "mode oscillations will make the discrete-mode run very slow"
        )
    if bath.n_modes < MIN_BATH_MODES:
        logger.warning(
            f"Only {bath.n_modes} bath modes; below {MIN_BATH_MODES} the "
            "continuum limit is poorly resolved"
        )

    n = bath.n_modes
    w = bath.frequencies
    g = bath.couplings.astype(complex)
    detuning = p.omega0 - w
    d_coupling = p.d_coupling

    def rhs(t: float, state: np.ndarray) -> np.ndarray:
        couple = g * np.sin(w * (p.beta * t - bath.gamma_cavity)) * np.exp(
            1j * detuning * t
        )
        c1, c2 = state[0], state[1]
        d = state[2 : 2 + n]
        dp = state[2 + n :]
        out = np.empty_like(state)
        out[0] = -1j * (d_coupling * c2 + couple @ d)
        out[1] = -1j * (d_coupling * c1 + couple @ dp)
        out[2 : 2 + n] = -1j * np.conj(couple) * c1
        out[2 + n :] = -1j * np.conj(couple) * c2
        return out

    h_out = grid.step
    sub = _rk4_substeps(p, bath, h_out)
    h = h_out / sub
    logger.info(
        f"Discrete-mode solve: {n} modes, Gamma={bath.gamma_cavity:g}, "
        f"{grid.n_steps * sub} RK4 steps of {h:.3g}"
    )

    state = np.zeros(2 + 2 * n, dtype=complex)
    state[0], state[1] = init.c1_0, init.c2_0
    c1 = np.empty(grid.n_steps + 1, dtype=complex)
    c2 = np.empty(grid.n_steps + 1, dtype=complex)
    c1[0], c2[0] = state[0], state[1]

    drift = 0.0
    for i in range(grid.n_steps):
        t = i * h_out
        for _ in range(sub):
            k1 = rhs(t, state)
            k2 = rhs(t + 0.5 * h, state + 0.5 * h * k1)
            k3 = rhs(t + 0.5 * h, state + 0.5 * h * k2)
            k4 = rhs(t + h, state + h * k3)
            state = state + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            t += h

        total = float(np.vdot(state, state).real)
        drift = max(drift, abs(total - 1.0))
        if drift > CONSERVATION_TOLERANCE:
            logger.error(f"Excitation drift {drift:.3g} at t={(i + 1) * h_out:g}")
            raise ConservationError(
                f"total excitation drifted by {drift:.3g} at lambda*t={(i + 1) * h_out:g} "
                f"(limit {CONSERVATION_TOLERANCE:g}); reduce the output step or the bath width"
            )
        c1[i + 1], c2[i + 1] = state[0], state[1]

    return AmplitudeTrajectory(
        t=grid.points(),
        c1=c1,
        c2=c2,
        solver="discrete_modes",
        excitation_drift=drift,
    )


class VolterraSolver:
    """Direct integro-differential reference solver"""

    name = "volterra"

    def __init__(self, max_step: Optional[float] = None):
        self.max_step = max_step if max_step is not None else settings.VOLTERRA_MAX_STEP

    def solve(
        self, p: SystemParams, init: InitialState, grid: TimeGrid
    ) -> AmplitudeTrajectory:
        logger.info(
            f"Volterra solve: gamma={p.gamma}, beta={p.beta}, D={p.d_coupling}, "
            f"t_max={grid.t_max}, max_step={self.max_step}"
        )
        return solve_volterra(p, init, grid, max_step=self.max_step)


class DiscreteModeSolver:
    """Discretised-reservoir reference solver"""

    name = "discrete_modes"

    def __init__(
        self,
        n_modes: Optional[int] = None,
        half_width: Optional[float] = None,
        gamma_cavity: Optional[float] = None,
        omega0_limit: Optional[float] = None,
    ):
        self.n_modes = n_modes
        self.half_width = half_width
        self.gamma_cavity = gamma_cavity
        self.omega0_limit = omega0_limit

    def bath_for(self, p: SystemParams) -> DiscreteBath:
        return discretize_bath(p, self.n_modes, self.half_width, self.gamma_cavity)

    def solve(
        self, p: SystemParams, init: InitialState, grid: TimeGrid
    ) -> AmplitudeTrajectory:
        return solve_discrete_modes(
            p, self.bath_for(p), init, grid, omega0_limit=self.omega0_limit
        )

# tests/test_oracle.py

import numpy as np
import pytest

from qbattery.core.errors import ConfigError, ConservationError, StepSizeError
from qbattery.core.params import kernel_from_params
from qbattery.models import DiscreteBath, InitialState, SystemParams, TimeGrid
from qbattery.services import oracle
from qbattery.services.oracle import (
    DiscreteModeSolver,
    VolterraSolver,
    discretize_bath,
    kernel_time_domain,
    solve_discrete_modes,
    solve_volterra,
)


def _params(**overrides):
    data = dict(omega0=1.5e9, gamma=0.1, d_coupling=0.3, delta=0.0, beta=0.0)
    data.update(overrides)
    return SystemParams(**data)


def test_kernel_at_zero_lag():
    """Test F(0) = g0"""
    k = kernel_from_params(_params(beta=5e-10, gamma=20.0))

    assert kernel_time_domain(k, 0.0) == pytest.approx(5.0)


def test_kernel_resting_exponential():
    """Test beta = 0 gives 0.025 exp(-tau)"""
    k = kernel_from_params(_params())
    tau = np.linspace(0, 10, 11)

    np.testing.assert_allclose(kernel_time_domain(k, tau), 0.025 * np.exp(-tau), rtol=1e-14)


def test_kernel_moving_non_markovian():
    """Test gamma = 20, beta = 1e-9 at tau = 1"""
    k = kernel_from_params(_params(gamma=20.0, beta=1e-9))
    expected = 5 * np.cosh(complex(1e-9, 1.5)) * np.exp(-1)

    assert abs(kernel_time_domain(k, 1.0) - expected) < 1e-9
    assert abs(kernel_time_domain(k, 1.0)) == pytest.approx(5 * abs(np.cos(1.5)) * np.exp(-1), rel=1e-6)


def test_kernel_negative_lag():
    """Test the kernel refuses tau < 0"""
    k = kernel_from_params(_params())
    with pytest.raises(ValueError):
        kernel_time_domain(k, -0.1)


def test_volterra_free_evolution():
    """Test vanishing coupling leaves the amplitudes at their initial values"""
    p = _params(gamma=1e-12, d_coupling=0.0)
    traj = solve_volterra(p, InitialState(c1_0=0.6, c2_0=0.8j), TimeGrid(t_max=5.0, n_steps=500))

    np.testing.assert_allclose(traj.c1, 0.6, atol=1e-9)
    np.testing.assert_allclose(traj.c2, 0.8j, atol=1e-9)
    assert traj.solver == "volterra"


def test_volterra_matches_analytic(decoupled_params, charger_full, analytic_c1):
    """Test the decoupled exponential-kernel case to 1e-5 at h = 0.005"""
    grid = TimeGrid(t_max=10.0, n_steps=2000)
    traj = solve_volterra(decoupled_params, charger_full, grid)

    assert np.max(np.abs(np.abs(traj.c1) - analytic_c1(grid.points()))) < 1e-5
    np.testing.assert_allclose(traj.c2, 0.0, atol=1e-15)


def test_volterra_second_order(decoupled_params, charger_full, analytic_c1):
    """Test halving the step cuts the error by about four"""
    errors = []
    for n_steps in (500, 1000):
        grid = TimeGrid(t_max=10.0, n_steps=n_steps)
        traj = solve_volterra(decoupled_params, charger_full, grid)
        errors.append(np.max(np.abs(traj.c1 - analytic_c1(grid.points()))))

    assert 3.0 < errors[0] / errors[1] < 5.0


def test_volterra_refines_coarse_grids(markovian_params, charger_full):
    """Test max_step integrates on a finer grid and samples back"""
    coarse = solve_volterra(
        markovian_params, charger_full, TimeGrid(t_max=1.0, n_steps=100), max_step=0.005
    )
    fine = solve_volterra(markovian_params, charger_full, TimeGrid(t_max=1.0, n_steps=200))

    assert coarse.t.size == 101
    np.testing.assert_allclose(coarse.c1, fine.c1[::2], atol=1e-14)
    np.testing.assert_allclose(coarse.c2, fine.c2[::2], atol=1e-14)


def test_volterra_rejects_coarse_step(charger_full):
    """Test the h vs h/2 check rejects an unresolved kernel"""
    p = _params(gamma=20.0)
    with pytest.raises(StepSizeError):
        solve_volterra(p, charger_full, TimeGrid(t_max=5.0, n_steps=10))


def test_discrete_bath_defaults():
    """Test unset bath arguments come from the settings"""
    p = _params(omega0=50.0, beta=0.02)
    bath = discretize_bath(p)

    assert bath.n_modes == 800
    assert bath.gamma_cavity == 40.0
    assert discretize_bath(p, n_modes=400, gamma_cavity=25.0).n_modes == 400


@pytest.mark.parametrize(
    "overrides", [{"n_modes": 0}, {"half_width": 0.0}, {"gamma_cavity": 0.0}]
)
def test_discrete_bath_rejects_explicit_zero(overrides):
    """Test an explicit zero is rejected rather than replaced by the default"""
    with pytest.raises(ConfigError):
        discretize_bath(_params(omega0=50.0, beta=0.02), **overrides)


def test_discrete_modes_rabi_limit(charger_full):
    """Test uncoupled cavities leave pure Rabi exchange between the qubits"""
    p = _params(omega0=50.0)
    bath = DiscreteBath(
        frequencies=np.full(400, 50.0),
        couplings=np.zeros(400),
        gamma_cavity=40.0,
    )
    grid = TimeGrid(t_max=10.0, n_steps=200)
    traj = solve_discrete_modes(p, bath, charger_full, grid)

    np.testing.assert_allclose(np.abs(traj.c2) ** 2, np.sin(0.3 * grid.points()) ** 2, atol=1e-8)
    assert traj.excitation_drift < 1e-8


def test_discrete_modes_conserve_excitation(charger_full):
    """Test the total excitation stays 1 with the bath coupled"""
    p = _params(omega0=50.0, beta=0.02)
    bath = discretize_bath(p, n_modes=400, half_width=50.0, gamma_cavity=40.0)
    traj = solve_discrete_modes(p, bath, charger_full, TimeGrid(t_max=2.0, n_steps=40))

    assert traj.solver == "discrete_modes"
    assert traj.excitation_drift < 1e-5
    p1, p2 = traj.populations()
    assert np.all(p1 + p2 <= 1 + 1e-5)


def test_discrete_modes_conservation_guard(monkeypatch, charger_full):
    """Test a drift above the limit aborts the run"""
    monkeypatch.setattr(oracle, "CONSERVATION_TOLERANCE", -1.0)
    p = _params(omega0=50.0, beta=0.02)
    bath = discretize_bath(p, n_modes=400)

    with pytest.raises(ConservationError):
        solve_discrete_modes(p, bath, charger_full, TimeGrid(t_max=0.1, n_steps=2))


def test_discrete_modes_warn_outside_regime(charger_full, caplog):
    """Test large omega0 or a thin bath is logged, not rejected"""
    p = _params(omega0=50.0)
    bath = DiscreteBath(frequencies=np.full(10, 50.0), couplings=np.zeros(10), gamma_cavity=40.0)

    with caplog.at_level("WARNING", logger="qbattery.services.oracle"):
        solve_discrete_modes(p, bath, charger_full, TimeGrid(t_max=0.1, n_steps=2))

    assert "bath modes" in caplog.text


def test_discrete_modes_omega0_limit_argument(charger_full, caplog):
    """Test the omega0 limit passed in overrides the process setting"""
    p = _params(omega0=50.0)
    bath = DiscreteBath(frequencies=np.full(400, 50.0), couplings=np.zeros(400), gamma_cavity=40.0)
    grid = TimeGrid(t_max=0.1, n_steps=2)

    with caplog.at_level("WARNING", logger="qbattery.services.oracle"):
        solve_discrete_modes(p, bath, charger_full, grid)
    assert "exceeds" not in caplog.text

    with caplog.at_level("WARNING", logger="qbattery.services.oracle"):
        solve_discrete_modes(p, bath, charger_full, grid, omega0_limit=10.0)
    assert "omega0=50 exceeds 10" in caplog.text


def test_solver_facades(markovian_params, charger_full):
    """Test the facades forward their configuration"""
    grid = TimeGrid(t_max=1.0, n_steps=50)
    volterra = VolterraSolver(max_step=0.005).solve(markovian_params, charger_full, grid)
    assert volterra.t.size == 51

    solver = DiscreteModeSolver(n_modes=400, half_width=50.0, gamma_cavity=40.0)
    bath = solver.bath_for(_params(omega0=50.0))
    assert bath.n_modes == 400


@pytest.mark.slow
def test_continuum_limit(charger_full):
    """Test the discrete bath reproduces the Volterra populations within 5%"""
    p = _params(omega0=50.0, beta=0.02)
    grid = TimeGrid(t_max=10.0, n_steps=2000)
    bath = discretize_bath(p, n_modes=800, half_width=50.0, gamma_cavity=40.0)

    discrete = solve_discrete_modes(p, bath, charger_full, grid)
    volterra = solve_volterra(p, charger_full, grid)

    for got, want in zip(discrete.populations(), volterra.populations()):
        assert np.max(np.abs(got - want)) <= 0.05
    assert discrete.excitation_drift < 1e-4


@pytest.mark.slow
def test_all_solvers_match_analytic(decoupled_params, charger_full, analytic_c1):
    """Test closed form, Volterra and discrete modes against the exact decoupled case"""
    from qbattery.services.closed_form import amplitudes

    grid = TimeGrid(t_max=30.0, n_steps=6000)
    exact = analytic_c1(grid.points())

    closed = amplitudes(decoupled_params, charger_full, grid)
    volterra = solve_volterra(decoupled_params, charger_full, grid)
    # beta = 0, so omega0 only sets the bath centre; scaled down to resolve the modes
    scaled = decoupled_params.model_copy(update={"omega0": 50.0})
    bath = discretize_bath(scaled, n_modes=1600, half_width=50.0, gamma_cavity=25.0)
    discrete = solve_discrete_modes(scaled, bath, charger_full, grid)

    for traj in (closed, volterra, discrete):
        assert np.max(np.abs(np.abs(traj.c1) - exact)) <= 1e-3, traj.solver

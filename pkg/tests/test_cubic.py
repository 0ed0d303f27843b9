# tests/test_cubic.py

from unittest.mock import patch

import numpy as np
import pytest

from qbattery.core.cubic import solve_cubic
from qbattery.core.errors import ConvergenceError, SolverError


def _matches(found, expected, rtol):
    for r in expected:
        gap = np.min(np.abs(found - r))
        assert gap <= rtol * max(1.0, abs(r)), f"root {r} missing from {found}"


def test_real_roots_sorted():
    """Test (s-1)(s-2)(s-3) gives 1, 2, 3 in order"""
    roots = solve_cubic([1, -6, 11, -6])

    np.testing.assert_allclose(roots, [1, 2, 3], atol=1e-12)


def test_non_monic_input():
    """Test a scaled cubic has the same roots"""
    np.testing.assert_allclose(solve_cubic([2, -12, 22, -12]), [1, 2, 3], atol=1e-12)


def test_complex_roots():
    """Test complex-conjugate and genuinely complex roots"""
    expected = np.array([-1.0, -0.5 + 2j, -0.5 - 2j])
    roots = solve_cubic(np.poly(expected))
    _matches(roots, expected, 1e-12)

    expected = np.array([-1 + 0.3j, -0.2 - 1j, 0.7j])
    roots = solve_cubic(np.poly(expected))
    _matches(roots, expected, 1e-12)


def test_sorted_by_real_then_imaginary():
    """Test the output ordering contract"""
    roots = solve_cubic(np.poly([-0.5 + 2j, -1.0, -0.5 - 2j]))

    assert roots[0].real == pytest.approx(-1.0)
    assert roots[1].imag < roots[2].imag


def test_random_cubics_match_numpy():
    """Test against numpy's companion-matrix roots on random complex cubics"""
    rng = np.random.default_rng(7)
    for _ in range(200):
        coeffs = np.concatenate(
            [[1.0], rng.normal(size=3) + 1j * rng.normal(size=3)]
        )
        roots = solve_cubic(coeffs)
        _matches(roots, np.roots(coeffs), 1e-8)
        for r in roots:
            assert abs(np.polyval(coeffs, r)) < 1e-10 * max(1.0, abs(r) ** 3)


def test_widely_scaled_roots():
    """Test roots spanning nine orders of magnitude keep relative accuracy"""
    expected = np.array([-0.5, -1 + 1e9j, -1 - 2e9j])
    roots = solve_cubic(np.poly(expected))

    assert np.min(np.abs(roots - expected[0])) < 1e-6
    for r in expected[1:]:
        assert np.min(np.abs(roots - r)) < 1e-9 * abs(r)


def test_near_triple_root():
    """Test (s - c)^3 returns c three times"""
    c = 0.5 + 0.5j
    roots = solve_cubic(np.poly([c, c, c]))

    assert roots.shape == (3,)
    assert np.max(np.abs(roots - c)) < 1e-6


def test_split_triple_root():
    """Test a 1e-9 cluster resolves to the cube root of rounding error"""
    c = 0.5 + 0.5j
    coeffs = np.poly([c - 1e-9, c, c + 1e-9j])
    roots = solve_cubic(coeffs)

    # a triple cluster is only determined to about eps**(1/3) ~ 5e-6
    assert np.max(np.abs(roots - c)) < 2e-5
    for r in roots:
        assert abs(np.polyval(coeffs, r)) < 1e-11


def test_zero_root():
    """Test a vanishing constant term gives an exact zero root"""
    roots = solve_cubic([1, -1, 0.025, 0])

    _matches(roots, [0.0, (1 + np.sqrt(0.9)) / 2, (1 - np.sqrt(0.9)) / 2], 1e-12)


@pytest.mark.parametrize(
    "coeffs",
    [[0, 1, 2, 3], [1, np.nan, 0, 0], [1, 0, np.inf, 0], [1, 2, 3]],
)
def test_invalid_coefficients(coeffs):
    """Test degenerate or non-finite input is a SolverError"""
    with pytest.raises(SolverError):
        solve_cubic(coeffs)


@patch("qbattery.core.cubic._polish", side_effect=lambda coeffs, x, steps: x)
@patch("qbattery.core.cubic._cardano", return_value=[10.0, 10.0, 10.0])
def test_residual_check_raises(mock_cardano, mock_polish):
    """Test unpolished bad estimates fail the residual test with diagnostics"""
    with pytest.raises(ConvergenceError) as exc:
        solve_cubic([1, -6, 11, -6])

    assert exc.value.residuals
    assert exc.value.exit_code == 3

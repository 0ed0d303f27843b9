# qbattery/core/cubic.py

"""
Roots of monic complex cubics: Cardano estimate, deflation of the two smaller
roots through a stable quadratic, then Newton polishing on the full cubic.
"""

import cmath
import logging
from typing import Sequence

import numpy as np

from qbattery.core.errors import ConvergenceError, SolverError

logger = logging.getLogger(__name__)

NEWTON_STEPS = 2
MAX_EXTRA_STEPS = 8
RESIDUAL_RTOL = 1e-12

_OMEGA = complex(-0.5, 3**0.5 / 2)  # primitive cube root of unity


def _cbrt(z: complex) -> complex:
    if z == 0:
        return 0j
    return abs(z) ** (1.0 / 3.0) * cmath.exp(1j * cmath.phase(z) / 3.0)


def _horner(coeffs: Sequence[complex], x: complex):
    """Value, derivative and backward-error scale of the cubic at x"""
    value = 0j
    deriv = 0j
    scale = 0.0
    ax = abs(x)
    for c in coeffs:
        deriv = deriv * x + value
        value = value * x + c
        scale = scale * ax + abs(c)
    return value, deriv, scale


def _cardano(c2: complex, c1: complex, c0: complex):
    shift = c2 / 3.0
    p = c1 - c2 * c2 / 3.0
    q = 2.0 * c2 * c2 * c2 / 27.0 - c2 * c1 / 3.0 + c0

    disc = cmath.sqrt(q * q / 4.0 + p * p * p / 27.0)
    w_plus = -q / 2.0 + disc
    w_minus = -q / 2.0 - disc
    u = _cbrt(w_plus if abs(w_plus) >= abs(w_minus) else w_minus)

    if u == 0:
        return [-shift, -shift, -shift]

    roots = []
    rot = 1 + 0j
    for _ in range(3):
        uk = u * rot
        roots.append(uk - p / (3.0 * uk) - shift)
        rot *= _OMEGA
    return roots


def _polish(coeffs: Sequence[complex], x: complex, steps: int) -> complex:
    value, deriv, _ = _horner(coeffs, x)
    for _ in range(steps):
        if value == 0 or deriv == 0:
            break
        candidate = x - value / deriv
        cand_value, cand_deriv, _ = _horner(coeffs, candidate)
        # only accept steps that reduce the residual
        if not abs(cand_value) < abs(value):
            break
        x, value, deriv = candidate, cand_value, cand_deriv
    return x


def _stable_quadratic(e1: complex, e0: complex):
    """Roots of x^2 + e1 x + e0 without cancellation"""
    disc = cmath.sqrt(e1 * e1 - 4.0 * e0)
    big = -(e1 + disc) / 2.0 if abs(e1 + disc) >= abs(e1 - disc) else -(e1 - disc) / 2.0
    if big == 0:
        return 0j, 0j
    return big, e0 / big


def solve_cubic(coeffs: Sequence[complex]) -> np.ndarray:
    """
    Three roots of c3 s^3 + c2 s^2 + c1 s + c0 (normally monic).

    Roots are sorted by real part, then imaginary part. Each satisfies
    |P(q)| <= RESIDUAL_RTOL * max(1, |q|^3, sum_k |c_k| |q|^k); otherwise
    ConvergenceError carries the residuals.
    """
    if len(coeffs) != 4:
        raise SolverError(f"a cubic needs 4 coefficients, got {len(coeffs)}")
    c = [complex(v) for v in coeffs]
    if not all(cmath.isfinite(v) for v in c):
        raise SolverError(f"non-finite cubic coefficients: {c}")
    if c[0] == 0:
        raise SolverError("leading coefficient of the cubic is zero")
    if c[0] != 1:
        c = [v / c[0] for v in c]
    _, c2, c1, c0 = c

    estimates = _cardano(c2, c1, c0)
    largest = max(estimates, key=abs)
    largest = _polish(c, largest, NEWTON_STEPS + MAX_EXTRA_STEPS)

    # Deflate from the constant and linear terms (stable when |largest| dominates)
    if largest != 0:
        e0 = -c0 / largest
        e1 = (e0 - c1) / largest
        r2, r3 = _stable_quadratic(e1, e0)
    else:
        r2, r3 = _stable_quadratic(c2, c1)
    roots = [largest, r2, r3]

    polished = []
    residuals = []
    for r in roots:
        r = _polish(c, r, NEWTON_STEPS)
        value, _, scale = _horner(c, r)
        if abs(value) > RESIDUAL_RTOL * max(1.0, abs(r) ** 3, scale):
            r = _polish(c, r, MAX_EXTRA_STEPS)
            value, _, scale = _horner(c, r)
        polished.append(r)
        residuals.append((abs(value), max(1.0, abs(r) ** 3, scale)))

    failed = [res for res, scale in residuals if res > RESIDUAL_RTOL * scale]
    if failed:
        logger.error(f"Cubic root polishing failed, residuals={residuals}")
        raise ConvergenceError(
            f"cubic roots did not converge (residuals {residuals})", residuals
        )

    out = np.array(polished, dtype=complex)
    order = np.lexsort((out.imag, out.real))
    return out[order]

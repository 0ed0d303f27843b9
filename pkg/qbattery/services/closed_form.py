# qbattery/services/closed_form.py

"""
Closed-form amplitudes from the Laplace-domain solution.

With X(s) = s + F(s), the pair of Laplace equations factors into the two
branches 1/(X - iD) and 1/(X + iD). Each branch is a ratio of a monic
quadratic ((s+b)^2 - a^2) over a monic cubic, inverted by residues:

    M(t) = 2 * sum_i w_i exp(q_i t),  w_i = ((q_i+b)^2 - a^2) / prod_{j!=i} (q_i - q_j)
"""

import itertools
import logging
from typing import List, Literal

import numpy as np

from qbattery.core.cubic import solve_cubic
from qbattery.core.errors import DegenerateRootsError
from qbattery.core.params import kernel_from_params
from qbattery.models import (
    AmplitudeTrajectory,
    BranchRoots,
    InitialState,
    KernelSpec,
    SolutionMode,
    SystemParams,
    TimeGrid,
)

logger = logging.getLogger(__name__)

DEGENERACY_RTOL = 1e-8
DEGENERACY_PERTURBATION = 1e-10

BranchSign = Literal[1, -1]


def branch_cubic(k: KernelSpec, d_coupling: float, branch_sign: BranchSign) -> np.ndarray:
    """
    Monic coefficients [1, c2, c1, c0] of (s + sign*iD)((s+b)^2 - a^2) + g0 (s+b).

    branch_sign = -1 is the factor (s + F(s)) - iD.
    """
    b, a2, g0 = k.b, k.a * k.a, k.g0
    sd = branch_sign * 1j * d_coupling
    n0 = b * b - a2
    return np.array(
        [
            1.0 + 0j,
            2.0 * b + sd,
            n0 + 2.0 * b * sd + g0,
            sd * n0 + g0 * b,
        ],
        dtype=complex,
    )


def shifted_branch_cubic(
    k: KernelSpec, d_coupling: float, branch_sign: BranchSign
) -> np.ndarray:
    """The branch cubic in u = s + b: (u - b + sign*iD)(u^2 - a^2) + g0 u"""
    a2 = k.a * k.a
    lead = -k.b + branch_sign * 1j * d_coupling
    return np.array([1.0 + 0j, lead, k.g0 - a2, -lead * a2], dtype=complex)


def _pair_gaps_degenerate(u: np.ndarray) -> bool:
    for i, j in itertools.combinations(range(3), 2):
        gap = abs(u[i] - u[j])
        if gap <= DEGENERACY_RTOL * max(abs(u[i]), abs(u[j])):
            return True
    return False


def _residues(u: np.ndarray, a: complex) -> np.ndarray:
    w = np.empty(3, dtype=complex)
    for i in range(3):
        others = [u[i] - u[j] for j in range(3) if j != i]
        w[i] = (u[i] * u[i] - a * a) / (others[0] * others[1])
    return w


def residue_weights(q, a: complex, b: complex) -> np.ndarray:
    """w_i for arbitrary distinct poles q given in the s variable"""
    return _residues(np.asarray(q, dtype=complex) + b, a)


def branch_roots(
    k: KernelSpec, d_coupling: float, branch_sign: BranchSign
) -> BranchRoots:
    """Poles and residue weights of one branch, solved in the shifted variable"""
    coeffs = shifted_branch_cubic(k, d_coupling, branch_sign)
    u = solve_cubic(coeffs)
    perturbed = False

    if _pair_gaps_degenerate(u):
        c0 = coeffs[3]
        bump = DEGENERACY_PERTURBATION * (
            abs(c0) or max(abs(coeffs[1]), abs(coeffs[2]), 1.0)
        )
        logger.warning(
            f"Near-degenerate roots on branch {branch_sign:+d} ({u}); "
            f"perturbing the constant coefficient by {bump:.3g}"
        )
        coeffs = coeffs.copy()
        coeffs[3] = c0 + bump
        u = solve_cubic(coeffs)
        perturbed = True
        if _pair_gaps_degenerate(u):
            raise DegenerateRootsError(
                f"branch {branch_sign:+d} roots stay degenerate after perturbation: {u}"
            )

    return BranchRoots(
        branch_sign=branch_sign,
        roots=u - k.b,
        residues=_residues(u, k.a),
        perturbed=perturbed,
    )


def m_kernel(roots: BranchRoots, t):
    """M(t) = 2 sum_i w_i exp(q_i t); scalar or array t"""
    if not np.all(np.isfinite(roots.residues)):
        raise DegenerateRootsError(
            f"non-finite residues on branch {roots.branch_sign:+d}: {roots.residues}"
        )
    t_arr = np.asarray(t, dtype=float)
    phases = np.exp(np.multiply.outer(t_arr, roots.roots))
    m = 2.0 * (phases * roots.residues).sum(axis=-1)
    return complex(m) if t_arr.ndim == 0 else m


def m_kernel_levi_civita(q: np.ndarray, a: complex, b: complex, t: float) -> complex:
    """The epsilon_ijk form of M(t); equal to m_kernel for distinct roots"""
    q = np.asarray(q, dtype=complex)
    vandermonde = (q[0] - q[1]) * (q[0] - q[2]) * (q[1] - q[2])
    total = 0j
    for i, j, l in itertools.permutations(range(3)):
        # parity of the permutation (i, j, l)
        sign = 1 if (i, j, l) in ((0, 1, 2), (1, 2, 0), (2, 0, 1)) else -1
        numer = (q[i] + b) ** 2 - a * a
        total += sign * np.exp(q[i] * t) * (q[j] - q[l]) * numer
    return complex(total / vandermonde)


def amplitudes(
    p: SystemParams, init: InitialState, grid: TimeGrid
) -> AmplitudeTrajectory:
    """c1(t), c2(t) by inverse Laplace transform of both branches"""
    k = kernel_from_params(p)
    minus = branch_roots(k, p.d_coupling, -1)
    branches = [minus]

    t = grid.points()
    m_minus = m_kernel(minus, t)
    c1_0, c2_0 = init.c1_0, init.c2_0

    if p.solution_mode is SolutionMode.TWO_BRANCH:
        plus = branch_roots(k, p.d_coupling, 1)
        branches.append(plus)
        m_plus = m_kernel(plus, t)
        even = m_minus + m_plus
        odd = m_minus - m_plus
        c1 = 0.25 * (c1_0 * even - c2_0 * odd)
        c2 = 0.25 * (c2_0 * even - c1_0 * odd)
    else:
        c1 = 0.5 * (c1_0 * m_minus.real - 1j * c2_0 * m_minus.imag)
        c2 = 0.5 * (c2_0 * m_minus.real - 1j * c1_0 * m_minus.imag)

    warnings: List[str] = [
        f"degenerate roots perturbed on branch {r.branch_sign:+d}"
        for r in branches
        if r.perturbed
    ]
    return AmplitudeTrajectory(
        t=t,
        c1=np.asarray(c1, dtype=complex),
        c2=np.asarray(c2, dtype=complex),
        solver=f"closed_form/{p.solution_mode.value}",
        warnings=tuple(warnings),
    )


class ClosedFormSolver:
    """Solver facade used by the run service"""

    name = "closed_form"

    def solve(
        self, p: SystemParams, init: InitialState, grid: TimeGrid
    ) -> AmplitudeTrajectory:
        logger.info(
            f"Closed-form solve: gamma={p.gamma}, beta={p.beta}, D={p.d_coupling}, "
            f"mode={p.solution_mode.value}/{p.kernel_mode.value}"
        )
        return amplitudes(p, init, grid)

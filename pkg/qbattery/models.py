# qbattery/models.py

from enum import Enum
from typing import Literal, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

NORM_TOLERANCE = 1e-12


class KernelMode(str, Enum):
    """Which frequency-domain kernel the solvers build"""

    CONSISTENT = "consistent"
    AS_PRINTED = "as_printed"


class SolutionMode(str, Enum):
    """How the two branch kernels are recombined into amplitudes"""

    TWO_BRANCH = "two_branch"
    PAPER_LITERAL = "paper_literal"


class FrozenModel(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)


class SystemParams(FrozenModel):
    """Physical parameters, every rate in units of the spectral width lambda"""

    omega0: float = Field(gt=0, allow_inf_nan=False)
    gamma: float = Field(gt=0, allow_inf_nan=False)
    d_coupling: float = Field(ge=0, allow_inf_nan=False)
    delta: float = Field(default=0.0, allow_inf_nan=False)
    beta: float = Field(ge=0, lt=1, allow_inf_nan=False)
    kernel_mode: KernelMode = KernelMode.CONSISTENT
    solution_mode: SolutionMode = SolutionMode.TWO_BRANCH


class KernelSpec(FrozenModel):
    """Reduced memory kernel F(tau) = g0 * cosh(a tau) * exp(-b tau)"""

    g0: float
    a: complex
    b: complex
    mode: KernelMode = KernelMode.CONSISTENT

    @model_validator(mode="after")
    def check_decay(self) -> "KernelSpec":
        if not self.b.real > 0:
            raise ValueError(f"kernel decay rate must have Re(b) > 0, got b={self.b}")
        return self


class InitialState(FrozenModel):
    """Amplitudes of |e_A,g_B> (charger excited) and |g_A,e_B> (battery excited)"""

    c1_0: complex
    c2_0: complex

    @model_validator(mode="after")
    def check_norm(self) -> "InitialState":
        norm = abs(self.c1_0) ** 2 + abs(self.c2_0) ** 2
        if abs(norm - 1.0) > NORM_TOLERANCE:
            raise ValueError(f"initial state must be normalised, |c|^2 = {norm!r}")
        return self

    @property
    def p_charger(self) -> float:
        return abs(self.c1_0) ** 2

    @property
    def p_battery(self) -> float:
        return abs(self.c2_0) ** 2


class TimeGrid(FrozenModel):
    """Uniform grid on [0, t_max] in units of lambda*t with n_steps intervals"""

    t_max: float = Field(gt=0, allow_inf_nan=False)
    n_steps: int = Field(ge=2)

    @property
    def step(self) -> float:
        return self.t_max / self.n_steps

    def points(self) -> np.ndarray:
        return np.linspace(0.0, self.t_max, self.n_steps + 1)


class BranchRoots(FrozenModel):
    """Poles of one branch factor (s + F(s)) -/+ iD and their residue weights"""

    branch_sign: Literal[1, -1]
    roots: np.ndarray
    residues: np.ndarray
    perturbed: bool = False

    @field_validator("roots", "residues", mode="before")
    @classmethod
    def check_triple(cls, value) -> np.ndarray:
        value = np.asarray(value, dtype=complex)
        if value.shape != (3,):
            raise ValueError(f"expected exactly 3 complex values, got {value.shape}")
        return value


class DiscreteBath(FrozenModel):
    """Finite set of cavity modes standing in for one Lorentzian reservoir"""

    frequencies: np.ndarray
    couplings: np.ndarray
    gamma_cavity: float = Field(gt=0)
    coverage: float = 1.0

    @model_validator(mode="after")
    def check_shapes(self) -> "DiscreteBath":
        if self.frequencies.shape != self.couplings.shape:
            raise ValueError("frequencies and couplings must have the same length")
        if self.frequencies.ndim != 1 or self.frequencies.size == 0:
            raise ValueError("a bath needs at least one mode")
        return self

    @property
    def n_modes(self) -> int:
        return int(self.frequencies.size)

    @property
    def spacing(self) -> float:
        if self.n_modes < 2:
            return 0.0
        return float(self.frequencies[1] - self.frequencies[0])

    @classmethod
    def from_params(
        cls,
        p: SystemParams,
        n_modes: int,
        half_width: float,
        gamma_cavity: float,
    ) -> "DiscreteBath":
        """
        Midpoint sampling of the Lorentzian on [w_c - W, w_c + W], w_c = omega0 - delta,
        with g_k^2 = J(w_k) dw. coverage is sum g_k^2 over the full weight gamma/2.
        """
        from qbattery.core.params import spectral_density

        if n_modes < 1:
            raise ValueError("n_modes must be positive")
        if not half_width > 0:
            raise ValueError("half_width must be positive")

        centre = p.omega0 - p.delta
        spacing = 2.0 * half_width / n_modes
        frequencies = centre - half_width + (np.arange(n_modes) + 0.5) * spacing
        weights = spectral_density(p, frequencies) * spacing
        return cls(
            frequencies=frequencies,
            couplings=np.sqrt(weights),
            gamma_cavity=gamma_cavity,
            coverage=float(weights.sum() / (p.gamma / 2.0)),
        )


class AmplitudeTrajectory(FrozenModel):
    """c1(t) (charger) and c2(t) (battery) sampled on a time grid"""

    t: np.ndarray
    c1: np.ndarray
    c2: np.ndarray
    solver: str
    warnings: Tuple[str, ...] = ()
    excitation_drift: Optional[float] = None

    @model_validator(mode="after")
    def check_lengths(self) -> "AmplitudeTrajectory":
        if not (self.t.shape == self.c1.shape == self.c2.shape):
            raise ValueError("t, c1 and c2 must share one shape")
        return self

    def populations(self) -> Tuple[np.ndarray, np.ndarray]:
        return np.abs(self.c1) ** 2, np.abs(self.c2) ** 2


class ObservableTrajectory(FrozenModel):
    """Figures of merit per time point; energies in units of omega0"""

    t: np.ndarray
    p_charger: np.ndarray
    p_battery: np.ndarray
    dE_A: np.ndarray
    dE_B: np.ndarray
    W: np.ndarray
    W_A: np.ndarray
    # NaN where the efficiency is undefined
    eta: np.ndarray

    @property
    def total_excitation(self) -> np.ndarray:
        return self.p_charger + self.p_battery

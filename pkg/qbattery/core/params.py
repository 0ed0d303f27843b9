# qbattery/core/params.py

"""
Parameter validation and the reduced kernel built from the qubit-motion physics.

Units: lambda = 1, so every rate is a ratio to the spectral width and time is
lambda*t. hbar = 1.
"""

import logging
import math
from typing import Any, Mapping, Union

import numpy as np
from pydantic import ValidationError

from qbattery.core.errors import ConfigError
from qbattery.models import InitialState, KernelMode, KernelSpec, SystemParams

logger = logging.getLogger(__name__)


def validate_params(raw: Union[SystemParams, Mapping[str, Any]]) -> SystemParams:
    """Re-run every SystemParams invariant, reporting offending fields as ConfigError"""
    data = raw.model_dump() if isinstance(raw, SystemParams) else dict(raw)
    try:
        return SystemParams.model_validate(data)
    except ValidationError as e:
        raise ConfigError.from_validation(e, "invalid system parameters") from e


def kernel_from_params(p: SystemParams) -> KernelSpec:
    """Reduce the parameters to the (g0, a, b) triple both solvers consume"""
    lambda_bar = complex(1.0, p.omega0 - p.delta)
    g0 = p.gamma / 4.0
    a = p.beta * lambda_bar

    if p.kernel_mode is KernelMode.CONSISTENT:
        # Laplace image of g0*cosh(a tau)*exp(-(1 - i delta) tau)
        b = complex(1.0, -p.delta)
    else:
        b = lambda_bar

    return KernelSpec(g0=g0, a=a, b=b, mode=p.kernel_mode)


def normalize_initial(c1_0: complex, c2_0: complex) -> InitialState:
    """Rescale (c1_0, c2_0) to unit norm, keeping the relative phase"""
    norm = math.hypot(abs(c1_0), abs(c2_0))
    if norm == 0.0:
        raise ConfigError("initial amplitudes (c1_0, c2_0) must not both be zero")

    if abs(norm - 1.0) > 1e-12:
        logger.warning(f"Initial state had norm {norm:.6g}; rescaling to 1.")
    return InitialState(c1_0=complex(c1_0) / norm, c2_0=complex(c2_0) / norm)


def spectral_density(p: SystemParams, omega):
    """Lorentzian J(omega) of width 1 centred on omega0 - delta"""
    omega = np.asarray(omega, dtype=float)
    return p.gamma / (2.0 * np.pi) / ((p.omega0 - omega - p.delta) ** 2 + 1.0)


def kernel_laplace(k: KernelSpec, s):
    """F(s) = g0 (s + b) / ((s + b)^2 - a^2)"""
    u = np.asarray(s, dtype=complex) + k.b
    return k.g0 * u / (u * u - k.a * k.a)

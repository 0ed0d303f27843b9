# qbattery/services/figures.py

"""
Catalogue of the figure datasets: which quantity each figure plots, the coupling
regime of its (a) and (b) panels, and the velocities drawn as separate curves.
"""

from typing import Any, Dict, List, Optional, Tuple

from pydantic import BaseModel

from qbattery.core.errors import ConfigError
from qbattery.data_schemas.run_config import RunConfig

MARKOVIAN_GAMMA = 0.1
NON_MARKOVIAN_GAMMA = 20.0
DIPOLE_COUPLING = 0.3
CAPTION_DELTA = 0.3
PANEL_T_MAX = {"a": 30.0, "b": 10.0}
FIGURE_STEP = 0.005

DEFAULT_BETAS = (0.0, 3e-10, 5e-10, 8e-10)
OVERLAP_BETAS = (0.0, 7e-10)

ENERGY_RANGE = (-0.05, 1.05)


class FigureCurve(BaseModel):
    """One observable drawn for every velocity; label is the legend prefix"""

    quantity: str
    label: str
    dashed: bool = False


class FigureSpec(BaseModel):
    figure_id: str
    title: str
    curves: List[FigureCurve]
    betas: Tuple[float, ...]
    gamma: float
    t_max: float
    y_label: str = "energy / ω0"
    y_range: Tuple[float, float] = ENERGY_RANGE
    uses_caption_delta: bool = False

    def configs(
        self,
        base: Optional[RunConfig] = None,
        delta_fig2_caption: bool = False,
        t_max: Optional[float] = None,
    ) -> List[RunConfig]:
        """One RunConfig per velocity, in curve order"""
        base = base or RunConfig()
        window = t_max if t_max is not None else self.t_max
        delta = (
            CAPTION_DELTA
            if self.uses_caption_delta and delta_fig2_caption
            else base.Delta_over_lambda
        )
        return [
            base.with_overrides(
                gamma_over_lambda=self.gamma,
                D_over_lambda=DIPOLE_COUPLING,
                Delta_over_lambda=delta,
                beta=beta,
                t_max_lambda=window,
                n_steps=max(2, round(window / FIGURE_STEP)),
            )
            for beta in self.betas
        ]


def _panel(number: int, panel: str) -> Dict[str, Any]:
    return {
        "gamma": MARKOVIAN_GAMMA if panel == "a" else NON_MARKOVIAN_GAMMA,
        "t_max": PANEL_T_MAX[panel],
        "betas": OVERLAP_BETAS if number == 3 else DEFAULT_BETAS,
        "uses_caption_delta": number == 2,
    }


def _build_catalogue() -> Dict[str, FigureSpec]:
    families = {
        2: ("Stored energy of the battery", [FigureCurve(quantity="dE_B", label="ΔE_B")], "ΔE_B / ω0"),
        3: (
            "Battery gain and charger loss",
            [
                FigureCurve(quantity="dE_B", label="ΔE_B"),
                FigureCurve(quantity="abs_dE_A", label="|ΔE_A|", dashed=True),
            ],
            "energy / ω0",
        ),
        4: ("Ergotropy of the battery", [FigureCurve(quantity="W", label="W")], "W / ω0"),
        5: ("Efficiency", [FigureCurve(quantity="eta", label="η")], "η"),
    }
    catalogue = {}
    for number, (title, curves, y_label) in families.items():
        for panel in ("a", "b"):
            figure_id = f"fig{number}{panel}"
            regime = "γ = 0.1λ" if panel == "a" else "γ = 20λ"
            catalogue[figure_id] = FigureSpec(
                figure_id=figure_id,
                title=f"{title}, {regime}",
                curves=curves,
                y_label=y_label,
                **_panel(number, panel),
            )
    return catalogue


FIGURES = _build_catalogue()


def get_figure(figure_id: str) -> FigureSpec:
    try:
        return FIGURES[figure_id]
    except KeyError:
        raise ConfigError(
            f"unknown figure id '{figure_id}'; choose from {', '.join(sorted(FIGURES))}"
        )

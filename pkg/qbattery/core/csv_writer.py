# qbattery/core/csv_writer.py

import csv
import io
import math
from pathlib import Path
from typing import Iterable, Sequence, Union

from qbattery.models import AmplitudeTrajectory, ObservableTrajectory

TRAJECTORY_HEADER = (
    "t_lambda",
    "re_c1",
    "im_c1",
    "re_c2",
    "im_c2",
    "p_charger",
    "p_battery",
    "dE_A",
    "dE_B",
    "W",
    "eta",
)


def format_float(value: float) -> str:
    """17 significant digits, '.' separator, empty for NaN"""
    value = float(value)
    if math.isnan(value):
        return ""
    return format(value + 0.0, ".17g")


def _render(header: Sequence[str], rows: Iterable[Sequence[str]]) -> bytes:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue().encode("utf-8")


def trajectory_csv_bytes(traj: AmplitudeTrajectory, obs: ObservableTrajectory) -> bytes:
    rows = (
        [
            format_float(obs.t[i]),
            format_float(traj.c1[i].real),
            format_float(traj.c1[i].imag),
            format_float(traj.c2[i].real),
            format_float(traj.c2[i].imag),
            format_float(obs.p_charger[i]),
            format_float(obs.p_battery[i]),
            format_float(obs.dE_A[i]),
            format_float(obs.dE_B[i]),
            format_float(obs.W[i]),
            format_float(obs.eta[i]),
        ]
        for i in range(obs.t.size)
    )
    return _render(TRAJECTORY_HEADER, rows)


def write_trajectory_csv(
    path: Union[str, Path], traj: AmplitudeTrajectory, obs: ObservableTrajectory
) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(trajectory_csv_bytes(traj, obs))
    return path


def write_table_csv(
    path: Union[str, Path], header: Sequence[str], rows: Iterable[Sequence[object]]
) -> Path:
    """Generic table; floats get the trajectory formatting, None becomes empty"""

    def cell(value: object) -> str:
        if value is None:
            return ""
        if isinstance(value, float):
            return format_float(value)
        return str(value)

    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(_render(header, ([cell(v) for v in row] for row in rows)))
    return path

"""Parameter sweeps over the required-SINR solver, with CSV emission.

A sweep varies one of {eps_c, theta, u_bytes, phi} over a log- or
linear-spaced grid, optionally overlaying a second parameter (e.g. packet
sizes 5/15/25 bytes), and records the required SNR per grid point in both
linear and dB. Presets fig1..fig4 reproduce the published trend curves.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace

import numpy as np

from .errors import ConvergenceError, DomainError
from .fbl import DispersionMode, SystemConfig
from .planner import (
    required_sinr_oma_with_iterations,
    required_sinr_with_iterations,
)
from .traffic import QosExponent, TrafficModel

SWEEP_VARIABLES = ("eps_c", "theta", "u_bytes", "phi")

CSV_HEADER = (
    "variable,overlay,variable_value,overlay_value,"
    "snr_linear,snr_db,feasible,iterations"
)

COMPARE_HEADER = (
    "variable,overlay,variable_value,overlay_value,"
    "noma_snr_linear,noma_snr_db,oma_snr_linear,oma_snr_db,gap_db,feasible"
)


@dataclass(frozen=True)
class SweepSpec:
    variable: str
    start: float
    stop: float
    points: int
    spacing: str = "log"
    overlay_param: str | None = None
    overlay_values: tuple[float, ...] = ()
    # base operating point (Table-1 style defaults)
    frame_duration_s: float = 5e-4
    bandwidth_hz: float = 1e5
    packet_size_bytes: float = 15.0
    tx_phase_s: float = 3e-4
    noise_psd: float = 1.0
    delay_bound_s: float = 8e-4
    mean_arrivals_per_frame: float = 0.01
    theta: float = 0.1
    eps_c: float = 1e-5
    mode: DispersionMode = DispersionMode.PAPER_LITERAL
    oma: bool = False

    def __post_init__(self):
        if self.variable not in SWEEP_VARIABLES:
            raise DomainError(
                f"variable must be one of {SWEEP_VARIABLES}, got {self.variable!r}"
            )
        if self.overlay_param is not None and self.overlay_param not in SWEEP_VARIABLES:
            raise DomainError(f"unknown overlay parameter {self.overlay_param!r}")
        if not self.start < self.stop:
            raise DomainError("start must be < stop")
        if self.points < 2:
            raise DomainError("points must be >= 2")
        if self.spacing not in ("log", "linear"):
            raise DomainError("spacing must be 'log' or 'linear'")
        if self.spacing == "log" and self.start <= 0:
            raise DomainError("log spacing requires positive endpoints")

    def grid(self) -> np.ndarray:
        if self.spacing == "log":
            return np.logspace(
                math.log10(self.start), math.log10(self.stop), self.points
            )
        return np.linspace(self.start, self.stop, self.points)


@dataclass(frozen=True)
class SweepRow:
    variable: str
    overlay: str
    variable_value: float
    overlay_value: float  # nan when no overlay
    snr_linear: float
    snr_db: float
    feasible: bool
    iterations: int


@dataclass(frozen=True)
class CompareRow:
    variable: str
    overlay: str
    variable_value: float
    overlay_value: float
    noma_snr_linear: float
    noma_snr_db: float
    oma_snr_linear: float
    oma_snr_db: float
    gap_db: float
    feasible: bool


def snr_db(linear: float) -> float:
    """10*log10, with 0 linear reported as 0 dB (degenerate no-load point)."""
    if linear == 0.0:
        return 0.0
    return 10.0 * math.log10(linear)


def _point_params(spec: SweepSpec, var_value: float, overlay_value: float | None):
    params = {
        "eps_c": spec.eps_c,
        "theta": spec.theta,
        "u_bytes": spec.packet_size_bytes,
        "phi": spec.tx_phase_s,
    }
    params[spec.variable] = var_value
    if spec.overlay_param is not None and overlay_value is not None:
        params[spec.overlay_param] = overlay_value
    return params


def _evaluate_point(spec: SweepSpec, params) -> tuple[float, int, bool]:
    cfg = SystemConfig.from_bytes(
        frame_duration_s=spec.frame_duration_s,
        bandwidth_hz=spec.bandwidth_hz,
        packet_size_bytes=params["u_bytes"],
        tx_phase_s=params["phi"],
        noise_psd=spec.noise_psd,
        delay_bound_s=spec.delay_bound_s,
    )
    traffic = TrafficModel(spec.mean_arrivals_per_frame, spec.frame_duration_s)
    qos = QosExponent(params["theta"])
    solve = (
        required_sinr_oma_with_iterations if spec.oma
        else required_sinr_with_iterations
    )
    gamma, iters = solve(cfg, traffic, qos, params["eps_c"], spec.mode)
    return gamma, iters, True


def run_sweep(spec: SweepSpec) -> list[SweepRow]:
    """Evaluate the required SNR on the full (variable, overlay) grid.

    Solver failures mark the row infeasible (snr = nan) instead of aborting
    the sweep. Row order follows the grid: overlay-major, variable-minor.
    """
    overlays = spec.overlay_values or (None,)
    rows: list[SweepRow] = []
    with warnings.catch_warnings():
        warnings.simplefilter("once")
        for ov in overlays:
            for v in spec.grid():
                params = _point_params(spec, float(v), ov)
                try:
                    gamma, iters, feasible = _evaluate_point(spec, params)
                except (ConvergenceError, DomainError):
                    gamma, iters, feasible = math.nan, 0, False
                rows.append(SweepRow(
                    variable=spec.variable,
                    overlay=spec.overlay_param or "",
                    variable_value=float(v),
                    overlay_value=math.nan if ov is None else float(ov),
                    snr_linear=gamma,
                    snr_db=snr_db(gamma) if feasible else math.nan,
                    feasible=feasible,
                    iterations=iters,
                ))
    return rows


def run_compare(spec: SweepSpec) -> list[CompareRow]:
    """Evaluate NOMA and OMA required SNR side by side on the same grid."""
    noma_rows = run_sweep(replace(spec, oma=False))
    oma_rows = run_sweep(replace(spec, oma=True))
    rows = []
    for nr, om in zip(noma_rows, oma_rows):
        feasible = nr.feasible and om.feasible
        gap = om.snr_db - nr.snr_db if feasible else math.nan
        rows.append(CompareRow(
            variable=nr.variable,
            overlay=nr.overlay,
            variable_value=nr.variable_value,
            overlay_value=nr.overlay_value,
            noma_snr_linear=nr.snr_linear,
            noma_snr_db=nr.snr_db,
            oma_snr_linear=om.snr_linear,
            oma_snr_db=om.snr_db,
            gap_db=gap,
            feasible=feasible,
        ))
    return rows


def _fmt(x: float) -> str:
    return repr(float(x))


def write_sweep_csv(rows: list[SweepRow], path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(CSV_HEADER + "\n")
        for r in rows:
            fh.write(
                f"{r.variable},{r.overlay},{_fmt(r.variable_value)},"
                f"{_fmt(r.overlay_value)},{_fmt(r.snr_linear)},{_fmt(r.snr_db)},"
                f"{'true' if r.feasible else 'false'},{r.iterations}\n"
            )


def read_sweep_csv(path) -> list[SweepRow]:
    rows = []
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().strip()
        if header != CSV_HEADER:
            raise DomainError(f"unexpected sweep CSV header: {header!r}")
        for line in fh:
            (var, ov, vv, ovv, lin, db, feas, iters) = line.rstrip("\n").split(",")
            rows.append(SweepRow(
                variable=var,
                overlay=ov,
                variable_value=float(vv),
                overlay_value=float(ovv),
                snr_linear=float(lin),
                snr_db=float(db),
                feasible=feas == "true",
                iterations=int(iters),
            ))
    return rows


def write_compare_csv(rows: list[CompareRow], path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(COMPARE_HEADER + "\n")
        for r in rows:
            fh.write(
                f"{r.variable},{r.overlay},{_fmt(r.variable_value)},"
                f"{_fmt(r.overlay_value)},{_fmt(r.noma_snr_linear)},"
                f"{_fmt(r.noma_snr_db)},{_fmt(r.oma_snr_linear)},"
                f"{_fmt(r.oma_snr_db)},{_fmt(r.gap_db)},"
                f"{'true' if r.feasible else 'false'}\n"
            )


PRESETS = {
    "fig1": SweepSpec(
        variable="eps_c", start=1e-5, stop=1e-3, points=20, spacing="log",
        overlay_param="u_bytes", overlay_values=(5.0, 15.0, 25.0),
        theta=0.1, tx_phase_s=3e-4,
    ),
    "fig2": SweepSpec(
        variable="eps_c", start=1e-5, stop=1e-3, points=20, spacing="log",
        overlay_param="phi", overlay_values=(1e-5, 3e-4),
        theta=0.1, packet_size_bytes=15.0,
    ),
    "fig3": SweepSpec(
        variable="theta", start=1e-3, stop=1.0, points=20, spacing="log",
        overlay_param="u_bytes", overlay_values=(5.0, 15.0, 25.0),
        eps_c=1e-5, tx_phase_s=3e-4,
    ),
    "fig4": SweepSpec(
        variable="theta", start=1e-3, stop=1.0, points=20, spacing="log",
        overlay_param="phi", overlay_values=(1e-5, 3e-4),
        eps_c=1e-5, packet_size_bytes=15.0,
    ),
}


def preset(name: str) -> SweepSpec:
    try:
        return PRESETS[name]
    except KeyError:
        raise DomainError(
            f"unknown preset {name!r}; choose from {sorted(PRESETS)}"
        ) from None

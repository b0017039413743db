"""Render sweep and comparison results to matplotlib figures.

The CSV stays the machine-readable contract; figures are rendered next to
it for quick visual inspection of the trend curves.
"""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

_AXIS_LABELS = {
    "eps_c": "transmission error probability",
    "theta": "QoS exponent",
    "u_bytes": "packet size (bytes)",
    "phi": "data transmission duration (s)",
}


def _group_by_overlay(rows):
    groups: dict[float, list] = {}
    for r in rows:
        key = r.overlay_value
        groups.setdefault(key, []).append(r)
    return groups


def plot_sweep(rows, path, log_x: bool = True, title: str = "") -> None:
    """One required-SNR curve per overlay value, saved as an image."""
    fig, ax = plt.subplots(figsize=(7, 5))
    for ov, group in _group_by_overlay(rows).items():
        xs = [r.variable_value for r in group if r.feasible]
        ys = [r.snr_db for r in group if r.feasible]
        label = None
        if not math.isnan(ov):
            label = f"{group[0].overlay} = {ov:g}"
        ax.plot(xs, ys, marker="o", markersize=3, label=label)
    if log_x:
        ax.set_xscale("log")
    ax.set_xlabel(_AXIS_LABELS.get(rows[0].variable, rows[0].variable))
    ax.set_ylabel("required SNR (dB)")
    if title:
        ax.set_title(title)
    ax.grid(True, which="both", alpha=0.3)
    if any(not math.isnan(r.overlay_value) for r in rows):
        ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_compare(rows, path, log_x: bool = True, title: str = "") -> None:
    """NOMA vs OMA required SNR per overlay value."""
    fig, ax = plt.subplots(figsize=(7, 5))
    for ov, group in _group_by_overlay(rows).items():
        xs = [r.variable_value for r in group if r.feasible]
        suffix = "" if math.isnan(ov) else f", {group[0].overlay}={ov:g}"
        ax.plot(xs, [r.noma_snr_db for r in group if r.feasible],
                marker="o", markersize=3, label=f"NOMA{suffix}")
        ax.plot(xs, [r.oma_snr_db for r in group if r.feasible],
                marker="s", markersize=3, linestyle="--", label=f"OMA{suffix}")
    if log_x:
        ax.set_xscale("log")
    ax.set_xlabel(_AXIS_LABELS.get(rows[0].variable, rows[0].variable))
    ax.set_ylabel("required SNR (dB)")
    if title:
        ax.set_title(title)
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_delay_ccdf(hist, analytic_decay_per_frame: float, path,
                    title: str = "") -> None:
    """Empirical log-CCDF of queueing delay with the analytic decay line."""
    ccdf = hist.ccdf()
    xs = [d for d in range(len(ccdf)) if ccdf[d] > 0]
    ys = [ccdf[d] for d in xs]
    fig, ax = plt.subplots(figsize=(7, 5))
    ax.semilogy(xs, ys, marker="o", markersize=3, label="empirical")
    if xs:
        ref = [math.exp(-analytic_decay_per_frame * d) for d in xs]
        ax.semilogy(xs, ref, linestyle="--", label="analytic decay")
    ax.set_xlabel("delay (frames)")
    ax.set_ylabel("P(delay > d)")
    if title:
        ax.set_title(title)
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)

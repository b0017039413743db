"""Comparison of the simulated queue against the large-deviations
approximation.

The decay rate of the delay tail is pinned by the operating-point QoS
exponent theta*, the theta at which the effective bandwidth equals the
service rate. The empirical log-CCDF slope and the per-bound violation
probabilities are checked against exp(-theta* E_B(theta*) D).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .numerics import SolverSettings, bisect
from .sim import DelayHistogram, QueueSimConfig, empirical_violation_frames
from .traffic import TrafficModel

SLOPE_TOLERANCE = 0.15
MIN_TAIL_SAMPLES = 100


def operating_point_theta(traffic: TrafficModel, service_packets_per_frame: float) -> float:
    """The theta* at which E_B(theta) equals the service rate.

    Solves lambda*(e^theta - 1)/theta = service (both per frame). Requires
    service strictly between the mean arrival rate and infinity.
    """
    lam = traffic.mean_arrivals_per_frame
    if lam <= 0:
        raise DomainError("operating point undefined for an empty source")
    if service_packets_per_frame <= lam:
        raise DomainError("service rate must exceed the mean arrival rate")

    def f(theta: float) -> float:
        return lam * math.expm1(theta) / theta - service_packets_per_frame

    return bisect(f, 1e-9, 200.0, SolverSettings(rel_tolerance=1e-12))


def analytic_decay_per_frame(traffic: TrafficModel, service_packets_per_frame: float) -> float:
    """theta* * E_B(theta*) * T_f: the analytic log-CCDF decay per frame."""
    theta = operating_point_theta(traffic, service_packets_per_frame)
    return theta * service_packets_per_frame


def empirical_slope(hist: DelayHistogram, min_tail_samples: int = MIN_TAIL_SAMPLES) -> float:
    """Least-squares slope of log CCDF(d) vs d over the reliable tail.

    Uses delays d >= 1 whose exceedance count (packets with sojourn > d)
    still holds at least min_tail_samples, so every regression point has
    usable statistics.
    """
    counts = hist.counts
    exceed = np.concatenate([np.cumsum(counts[::-1])[::-1][1:], [0]])
    ds = [d for d in range(1, len(counts)) if exceed[d] >= min_tail_samples]
    if len(ds) < 3:
        raise DomainError(
            f"too few reliable tail bins ({len(ds)}) for a slope estimate"
        )
    xs = np.array(ds, dtype=float)
    ys = np.log(exceed[ds] / hist.total_packets)
    slope = np.polyfit(xs, ys, 1)[0]
    return float(slope)


@dataclass(frozen=True)
class BoundCheck:
    delay_frames: int
    analytic: float
    empirical: float
    ci_low: float
    ci_high: float
    passed: bool


@dataclass(frozen=True)
class ValidationReport:
    analytic_decay_per_frame: float
    empirical_decay_per_frame: float
    slope_relative_error: float
    slope_ok: bool
    bound_checks: tuple[BoundCheck, ...]
    bounds_ok: bool

    @property
    def passed(self) -> bool:
        return self.slope_ok and self.bounds_ok


def validate_queue_approximation(
    cfg: QueueSimConfig,
    hist: DelayHistogram,
    slope_tolerance: float = SLOPE_TOLERANCE,
) -> ValidationReport:
    """Check the simulated delay tail against the analytic approximation.

    Slope: the empirical log-CCDF decay must match theta* E_B(theta*) T_f
    within slope_tolerance. Bounds: at every delay bound with at least
    MIN_TAIL_SAMPLES exceedances, the empirical queueing-delay violation
    must not exceed the analytic value by more than the 95% CI half-width
    plus the model slack (this encodes the eta <= 1 conservatism of the
    approximation).

    The analytic bound is on queueing delay only; the histogram's sojourn
    also contains the packet's own transmission time (ceil(1/service)
    frames), which is subtracted before the comparison. Without this the
    comparison would carry a spurious e^{decay/service} prefactor.
    """
    decay = analytic_decay_per_frame(cfg.traffic, cfg.service_packets_per_frame)
    slope = empirical_slope(hist)
    rel_err = abs(-slope - decay) / decay
    slope_ok = rel_err <= slope_tolerance

    own_frames = math.ceil(1.0 / cfg.service_packets_per_frame - 1e-12)
    checks = []
    counts = hist.counts
    exceed = np.concatenate([np.cumsum(counts[::-1])[::-1][1:], [0]])
    for d in range(1, len(counts) - own_frames):
        if exceed[d + own_frames] < MIN_TAIL_SAMPLES:
            break
        est = empirical_violation_frames(hist, d + own_frames)
        analytic = math.exp(-decay * d)
        ci_half = est.ci_high - est.probability
        passed = est.probability <= analytic * (1.0 + slope_tolerance) + ci_half
        checks.append(BoundCheck(
            delay_frames=d,
            analytic=analytic,
            empirical=est.probability,
            ci_low=est.ci_low,
            ci_high=est.ci_high,
            passed=passed,
        ))
    bounds_ok = bool(checks) and all(c.passed for c in checks)
    return ValidationReport(
        analytic_decay_per_frame=decay,
        empirical_decay_per_frame=-slope,
        slope_relative_error=rel_err,
        slope_ok=slope_ok,
        bound_checks=tuple(checks),
        bounds_ok=bounds_ok,
    )

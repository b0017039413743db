"""Effective bandwidth of Poisson packet arrivals and the queueing-delay
violation approximation.

Units: the arrival mean counts packets per frame, the effective bandwidth
is packets per second (the frame duration supplies the 1/T_f factor), and
delay bounds are seconds, so theta * E_B * D is dimensionless.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError, InfeasibleError
from .numerics import check_probability

THETA_MIN = 1e-12
THETA_MAX = 1e6


@dataclass(frozen=True)
class TrafficModel:
    """Poisson arrivals: mean packets per frame and the frame duration."""

    mean_arrivals_per_frame: float
    frame_duration_s: float

    def __post_init__(self):
        if self.mean_arrivals_per_frame < 0:
            raise DomainError("mean_arrivals_per_frame must be >= 0")
        if self.frame_duration_s <= 0:
            raise DomainError("frame_duration_s must be > 0")

    @property
    def mean_rate(self) -> float:
        """Mean arrival rate in packets per second."""
        return self.mean_arrivals_per_frame / self.frame_duration_s


@dataclass(frozen=True)
class QosExponent:
    """Per-packet QoS exponent; smaller theta tolerates larger delays."""

    theta: float

    def __post_init__(self):
        if self.theta <= 0:
            raise DomainError("theta must be > 0")


@dataclass(frozen=True)
class DelayBound:
    """Queueing delay bound in seconds."""

    d_max_s: float

    def __post_init__(self):
        if self.d_max_s <= 0:
            raise DomainError("d_max_s must be > 0")


def effective_bandwidth(traffic: TrafficModel, qos: QosExponent) -> float:
    """Minimal constant service rate (packets/s) meeting the QoS exponent.

    For Poisson per-frame arrivals the log moment generating function is
    lambda * (e^theta - 1), giving
    E_B(theta) = lambda * (e^theta - 1) / (T_f * theta).
    """
    theta = qos.theta
    lam = traffic.mean_arrivals_per_frame
    return lam * math.expm1(theta) / (traffic.frame_duration_s * theta)


def delay_violation_probability(
    traffic: TrafficModel,
    qos: QosExponent,
    bound: DelayBound,
    eta: float = 1.0,
) -> float:
    """Large-deviations approximation of Pr{delay > bound}.

    eta is the non-empty-buffer prefactor; the conservative default 1.0
    gives exp(-theta * E_B(theta) * D).
    """
    if not (0.0 < eta <= 1.0):
        raise DomainError("eta must be in (0, 1]")
    exponent = qos.theta * effective_bandwidth(traffic, qos) * bound.d_max_s
    p = eta * math.exp(-exponent)
    return min(p, 1.0)


def solve_qos_exponent(
    traffic: TrafficModel,
    bound: DelayBound,
    target_eq: float,
) -> QosExponent:
    """Invert the delay-violation approximation: find theta with
    exp(-theta * E_B(theta) * D) = target_eq.

    The map theta -> theta * E_B(theta) * D equals
    lambda * (e^theta - 1) * D / T_f, strictly increasing in theta, so the
    inverse is closed-form: theta = log1p(-ln(target) * T_f / (lambda * D)).
    """
    check_probability(target_eq, "target_eq")
    lam = traffic.mean_arrivals_per_frame
    if lam <= 0:
        raise InfeasibleError(
            "no arrivals: the delay-violation probability is degenerate and "
            "does not determine theta"
        )
    needed = -math.log(target_eq) * traffic.frame_duration_s / (lam * bound.d_max_s)
    theta = math.log1p(needed)
    if not (THETA_MIN <= theta <= THETA_MAX):
        lo = _forward(traffic, bound, THETA_MIN)
        hi = _forward(traffic, bound, THETA_MAX)
        raise InfeasibleError(
            f"target_eq={target_eq!r} needs theta={theta!r} outside "
            f"[{THETA_MIN}, {THETA_MAX}]; achievable violation range is "
            f"[{hi!r}, {lo!r}]"
        )
    return QosExponent(theta)


def _forward(traffic: TrafficModel, bound: DelayBound, theta: float) -> float:
    try:
        return delay_violation_probability(traffic, QosExponent(theta), bound)
    except OverflowError:
        return 0.0  # exponent too large: violation is numerically zero

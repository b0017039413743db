"""End-to-end required-SNR planning.

Splits the overall packet-loss budget into a transmission-error part and a
queueing part, turns the queueing part plus the delay bound into a QoS
exponent, solves the per-message required SINR under the finite-blocklength
rate model, and reconciles the three per-message SINRs into a single
transmit SNR.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

from .errors import ConvergenceError, DomainError, InfeasibleError
from .fbl import DispersionMode, SystemConfig, achievable_packets
from .noma import SinrMode, SinrTriple, solve_rho_for_targets
from .numerics import SolverSettings, bisect, check_probability, inv_q_function
from .traffic import (
    DelayBound,
    QosExponent,
    TrafficModel,
    effective_bandwidth,
    solve_qos_exponent,
)

LN2 = math.log(2.0)

# math.expm1 overflows just above 709.78; past this, ln(1+gamma) has no
# finite gamma in double precision.
_MAX_LOG_SINR = 709.0

MESSAGE_LABELS = ("11", "12", "22")

_SOLVER = SolverSettings(rel_tolerance=1e-13, abs_tolerance=1e-30, max_iterations=300)


@dataclass(frozen=True)
class EqualSplit:
    pass


@dataclass(frozen=True)
class FixedSplit:
    ratio: float  # fraction of eps_d assigned to the transmission error

    def __post_init__(self):
        if not (0.0 < self.ratio < 1.0):
            raise DomainError("split ratio must be in (0, 1)")


@dataclass(frozen=True)
class OptimizedSplit:
    grid_points: int = 0  # 0 = golden-section search


SplitPolicy = EqualSplit | FixedSplit | OptimizedSplit


@dataclass(frozen=True)
class ReliabilityBudget:
    """Overall loss target eps_d and its split eps_c + eps_q = eps_d."""

    eps_d: float
    eps_c: float
    eps_q: float
    split_policy: SplitPolicy = field(default_factory=EqualSplit)

    def __post_init__(self):
        check_probability(self.eps_d, "eps_d")
        if not (0.0 < self.eps_c < self.eps_d and 0.0 < self.eps_q < self.eps_d):
            raise DomainError("eps_c and eps_q must each lie in (0, eps_d)")
        if abs(self.eps_c + self.eps_q - self.eps_d) > 1e-15:
            raise DomainError("eps_c + eps_q must equal eps_d")


@dataclass(frozen=True)
class PlanResult:
    required_sinr_per_message: dict[str, float]
    required_rho: float
    qos_exponent: QosExponent | None
    budget: ReliabilityBudget
    feasible: bool
    diagnostics: str = ""


def _rate_exponent(cfg: SystemConfig, traffic: TrafficModel, qos: QosExponent) -> float:
    """The queueing term of the rate balance: T_f * u * ln2 * E_B / (phi*B)."""
    eb = effective_bandwidth(traffic, qos)
    return cfg.frame_duration_s * cfg.packet_size_bits * LN2 * eb / cfg.blocklength


def _solve_rate_balance(a: float, c: float, mode: DispersionMode) -> tuple[float, int]:
    """Solve x = a + c*sqrt(V(e^x - 1)) for x = ln(1+gamma) >= 0.

    a is the queueing (effective-bandwidth) term, c the dispersion penalty
    coefficient Qinv(eps_c)/sqrt(phi*B). Fixed-point iteration seeded with
    the dispersion supremum V = 1; bracketed bisection as fallback. Returns
    (x, iterations).
    """
    if a == 0.0:
        # No traffic: gamma = 0 satisfies the balance (V(0) = 0) and is
        # the minimal requirement.
        return 0.0, 0
    if c == 0.0:
        return a, 0

    def g(x: float) -> float:
        # Dispersion in terms of x = ln(1+gamma), overflow-safe for large x:
        # 1 - 1/(1+gamma) = -expm1(-x); 1 - (1+gamma)^-2 = -expm1(-2x).
        x = max(x, 0.0)
        if mode is DispersionMode.PAPER_LITERAL:
            v = -math.expm1(-x)
        else:
            v = -math.expm1(-2.0 * x)
        return a + c * math.sqrt(v)

    x = max(a + c, 0.0)  # V = 1 seed
    prev_step = 0.0
    flips = 0
    for it in range(1, _SOLVER.max_iterations + 1):
        gx = g(x)
        step = gx - x
        if abs(step) <= max(1e-15, 1e-13 * abs(gx)):
            return max(gx, 0.0), it
        if prev_step != 0.0 and (step > 0) != (prev_step > 0):
            flips += 1
            if flips >= 3:
                break
        prev_step = step
        x = gx

    if c > 0:
        lo, hi = a, a + c
    else:
        lo, hi = max(a + c, 0.0), a
    x = bisect(lambda t: t - g(t), lo, hi, _SOLVER)
    return max(x, 0.0), _SOLVER.max_iterations


def required_sinr(
    cfg: SystemConfig,
    traffic: TrafficModel,
    qos: QosExponent,
    eps_c: float,
    mode: DispersionMode = DispersionMode.PAPER_LITERAL,
) -> float:
    """Minimum SINR so the finite-blocklength rate carries the effective
    bandwidth of the arrival stream at decoding error eps_c.

    Solves ln(1+gamma) = (T_f u ln2/(phi B)) E_B(theta)
                         + sqrt(V(gamma)/(phi B)) Qinv(eps_c).
    """
    gamma, _ = required_sinr_with_iterations(cfg, traffic, qos, eps_c, mode)
    return gamma


def required_sinr_with_iterations(
    cfg: SystemConfig,
    traffic: TrafficModel,
    qos: QosExponent,
    eps_c: float,
    mode: DispersionMode = DispersionMode.PAPER_LITERAL,
) -> tuple[float, int]:
    check_probability(eps_c, "eps_c")
    a = _rate_exponent(cfg, traffic, qos)
    c = inv_q_function(eps_c) / math.sqrt(cfg.blocklength)
    x, iters = _solve_rate_balance(a, c, mode)
    if x > _MAX_LOG_SINR:
        raise DomainError(
            f"required SINR exp({x:.1f})-1 exceeds the floating-point range; "
            "the operating point is beyond any physical link budget"
        )
    return math.expm1(x), iters


def required_sinr_oma(
    cfg: SystemConfig,
    traffic: TrafficModel,
    qos: QosExponent,
    eps_c: float,
    mode: DispersionMode = DispersionMode.PAPER_LITERAL,
) -> float:
    """OMA baseline: each user gets half the blocklength, doubling both
    terms of the rate balance (the dispersion one by sqrt(2))."""
    gamma, _ = required_sinr_oma_with_iterations(cfg, traffic, qos, eps_c, mode)
    return gamma


def required_sinr_oma_with_iterations(
    cfg: SystemConfig,
    traffic: TrafficModel,
    qos: QosExponent,
    eps_c: float,
    mode: DispersionMode = DispersionMode.PAPER_LITERAL,
) -> tuple[float, int]:
    check_probability(eps_c, "eps_c")
    a = 2.0 * _rate_exponent(cfg, traffic, qos)
    c = math.sqrt(2.0) * inv_q_function(eps_c) / math.sqrt(cfg.blocklength)
    x, iters = _solve_rate_balance(a, c, mode)
    if x > _MAX_LOG_SINR:
        raise DomainError(
            f"required SINR exp({x:.1f})-1 exceeds the floating-point range; "
            "the operating point is beyond any physical link budget"
        )
    return math.expm1(x), iters


def split_budget(
    eps_d: float,
    policy: SplitPolicy,
    cfg: SystemConfig,
    traffic: TrafficModel,
    bound: DelayBound,
    mode: DispersionMode = DispersionMode.PAPER_LITERAL,
) -> ReliabilityBudget:
    """Apportion eps_d between transmission error and queueing violation."""
    check_probability(eps_d, "eps_d")
    if isinstance(policy, EqualSplit):
        eps_c = 0.5 * eps_d
    elif isinstance(policy, FixedSplit):
        eps_c = policy.ratio * eps_d
    elif isinstance(policy, OptimizedSplit):
        eps_c = _optimize_split(eps_d, policy, cfg, traffic, bound, mode)
    else:
        raise DomainError(f"unknown split policy {policy!r}")
    return ReliabilityBudget(
        eps_d=eps_d, eps_c=eps_c, eps_q=eps_d - eps_c, split_policy=policy
    )


def _split_objective(
    r: float,
    eps_d: float,
    cfg: SystemConfig,
    traffic: TrafficModel,
    bound: DelayBound,
    mode: DispersionMode,
) -> float:
    eps_c = r * eps_d
    eps_q = eps_d - eps_c
    try:
        qos = solve_qos_exponent(traffic, bound, eps_q)
        return required_sinr(cfg, traffic, qos, eps_c, mode)
    except (InfeasibleError, ConvergenceError, DomainError):
        return math.inf


_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def _optimize_split(
    eps_d: float,
    policy: OptimizedSplit,
    cfg: SystemConfig,
    traffic: TrafficModel,
    bound: DelayBound,
    mode: DispersionMode,
) -> float:
    """Golden-section search over the split ratio on a log scale."""

    def f(t: float) -> float:
        return _split_objective(math.exp(t), eps_d, cfg, traffic, bound, mode)

    lo, hi = math.log(1e-6), math.log(1.0 - 1e-6)
    if policy.grid_points:
        # Coarse grid narrowing for multimodal safety, then refine.
        pts = [lo + (hi - lo) * k / (policy.grid_points - 1)
               for k in range(policy.grid_points)]
        vals = [f(t) for t in pts]
        k = min(range(len(vals)), key=vals.__getitem__)
        lo = pts[max(k - 1, 0)]
        hi = pts[min(k + 1, len(pts) - 1)]
    x1 = hi - _GOLDEN * (hi - lo)
    x2 = lo + _GOLDEN * (hi - lo)
    f1, f2 = f(x1), f(x2)
    for _ in range(200):
        if hi - lo < 1e-10:
            break
        if f1 <= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - _GOLDEN * (hi - lo)
            f1 = f(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + _GOLDEN * (hi - lo)
            f2 = f(x2)
    t = 0.5 * (lo + hi)
    if not math.isfinite(f(t)):
        raise InfeasibleError(
            f"no split of eps_d={eps_d!r} yields a solvable plan"
        )
    return math.exp(t) * eps_d


def plan_noma(
    cfg: SystemConfig,
    traffic: TrafficModel | Mapping[str, TrafficModel],
    h1_sq: float,
    h2_sq: float,
    alpha1: float,
    alpha2: float,
    eps_d: float,
    bound: DelayBound,
    dispersion_mode: DispersionMode = DispersionMode.PAPER_LITERAL,
    sinr_mode: SinrMode = SinrMode.PAPER_LITERAL,
    split_policy: SplitPolicy | None = None,
) -> PlanResult:
    """Full plan: budget split, QoS exponent, per-message required SINR,
    and the single transmit SNR covering all three decodes.

    traffic may be one model shared by all messages or a mapping keyed by
    "11", "12", "22". Infeasibility is reported in the result, not raised.
    """
    policy = split_policy if split_policy is not None else EqualSplit()
    traffic_map = _traffic_map(traffic)

    per_message: dict[str, float] = {}
    thetas: dict[str, QosExponent | None] = {}
    budget: ReliabilityBudget | None = None
    notes: list[str] = []
    for label in MESSAGE_LABELS:
        tm = traffic_map[label]
        b = split_budget(eps_d, policy, cfg, tm, bound, dispersion_mode)
        if budget is None:
            budget = b
        if tm.mean_arrivals_per_frame == 0.0:
            # No arrivals on this stream: nothing to carry, nothing queued.
            per_message[label] = 0.0
            thetas[label] = None
            notes.append(f"message {label}: no arrivals, SINR target 0")
            continue
        try:
            qos = solve_qos_exponent(tm, bound, b.eps_q)
        except InfeasibleError as exc:
            return PlanResult(
                required_sinr_per_message={},
                required_rho=math.inf,
                qos_exponent=None,
                budget=b,
                feasible=False,
                diagnostics=f"message {label}: QoS exponent infeasible: {exc}",
            )
        thetas[label] = qos
        try:
            per_message[label] = required_sinr(cfg, tm, qos, b.eps_c, dispersion_mode)
        except ConvergenceError as exc:
            return PlanResult(
                required_sinr_per_message={},
                required_rho=math.inf,
                qos_exponent=qos,
                budget=b,
                feasible=False,
                diagnostics=f"message {label}: SINR solver failed: {exc}",
            )

    assert budget is not None
    target = SinrTriple(
        gamma_22=per_message["22"],
        gamma_12=per_message["12"],
        gamma_11=per_message["11"],
    )
    common_theta = thetas["22"] if thetas["22"] is not None else thetas["11"]
    if all(g == 0.0 for g in per_message.values()):
        rho = 0.0
    else:
        try:
            rho = solve_rho_for_targets(
                h1_sq, h2_sq, alpha1, alpha2, target, sinr_mode
            )
        except InfeasibleError as exc:
            return PlanResult(
                required_sinr_per_message=per_message,
                required_rho=math.inf,
                qos_exponent=common_theta,
                budget=budget,
                feasible=False,
                diagnostics=f"transmit-SNR ceiling: {exc}",
            )
    return PlanResult(
        required_sinr_per_message=per_message,
        required_rho=rho,
        qos_exponent=common_theta,
        budget=budget,
        feasible=True,
        diagnostics="; ".join(notes) if notes else "ok",
    )


def _traffic_map(
    traffic: TrafficModel | Mapping[str, TrafficModel],
) -> dict[str, TrafficModel]:
    if isinstance(traffic, TrafficModel):
        return {label: traffic for label in MESSAGE_LABELS}
    missing = [label for label in MESSAGE_LABELS if label not in traffic]
    if missing:
        raise DomainError(f"traffic map missing message labels: {missing}")
    return {label: traffic[label] for label in MESSAGE_LABELS}


def verify_plan(
    plan: PlanResult,
    cfg: SystemConfig,
    traffic: TrafficModel | Mapping[str, TrafficModel],
    mode: DispersionMode = DispersionMode.PAPER_LITERAL,
    tolerance: float = 1e-9,
) -> dict[str, float]:
    """Round-trip check: at each message's required SINR, the achievable
    packet count per frame must equal T_f * E_B(theta).

    Returns per-message relative residuals (positive = more packets than
    needed). Residuals above `tolerance` indicate a failed plan.
    """
    if not plan.feasible:
        raise DomainError("verify_plan requires a feasible plan")
    traffic_map = _traffic_map(traffic)
    residuals: dict[str, float] = {}
    for label, gamma in plan.required_sinr_per_message.items():
        tm = traffic_map[label]
        if tm.mean_arrivals_per_frame == 0.0 or plan.qos_exponent is None:
            residuals[label] = 0.0
            continue
        demand = cfg.frame_duration_s * effective_bandwidth(tm, plan.qos_exponent)
        supply = achievable_packets(gamma, cfg, plan.budget.eps_c, mode)
        residuals[label] = (supply - demand) / demand if demand else supply
    return residuals

"""Required-SNR planning for two-user power-domain NOMA downlinks under
joint URLLC latency/reliability targets.

Combines finite-blocklength (normal approximation) coding analysis with
effective-bandwidth queueing analysis, plus a seeded Monte Carlo queue
simulator that validates the queueing approximation.
"""

from .errors import (
    BracketError,
    ConfigError,
    ConvergenceError,
    DomainError,
    InfeasibleError,
    NomaplanError,
    StabilityError,
)
from .fbl import (
    DispersionMode,
    SystemConfig,
    achievable_packets,
    achievable_packets_oma,
    channel_dispersion,
    transmission_error_probability,
)
from .noma import (
    NomaLink,
    SinrMode,
    SinrTriple,
    sinr_triple,
    solve_rho_for_targets,
    weak_user_sinr_ceiling,
)
from .numerics import (
    SolverSettings,
    bisect,
    fixed_point,
    inv_q_function,
    q_function,
)
from .planner import (
    EqualSplit,
    FixedSplit,
    OptimizedSplit,
    PlanResult,
    ReliabilityBudget,
    plan_noma,
    required_sinr,
    required_sinr_oma,
    split_budget,
    verify_plan,
)
from .sim import (
    DelayHistogram,
    QueueSimConfig,
    empirical_violation,
    rayleigh_gains,
    simulate_queue,
)
from .traffic import (
    DelayBound,
    QosExponent,
    TrafficModel,
    delay_violation_probability,
    effective_bandwidth,
    solve_qos_exponent,
)

__version__ = "0.1.0"

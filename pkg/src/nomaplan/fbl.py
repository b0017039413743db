"""Finite-blocklength (normal approximation) rate model.

Achievable packets per frame as a function of SINR, blocklength phi*B,
packet size, and decoding error target, plus the exact algebraic inverse
giving the error probability at a fixed packet rate.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from enum import Enum

from .errors import DomainError
from .numerics import check_probability, inv_q_function, q_function

LN2 = math.log(2.0)

MIN_RELIABLE_BLOCKLENGTH = 50


class DispersionMode(Enum):
    """Which channel-dispersion formula to use.

    PAPER_LITERAL: V = 1 - 1/(1+gamma). STANDARD: V = 1 - (1+gamma)^-2,
    the classical normal-approximation dispersion in nats. The literal form
    omits the square; both are exposed, the literal one is the default so
    published curves reproduce as printed.
    """

    PAPER_LITERAL = "paper"
    STANDARD = "corrected"


@dataclass(frozen=True)
class SystemConfig:
    """Frame, bandwidth, packet, and noise parameters.

    packet_size_bits stores bits; use from_bytes() for byte-sized packets.
    bandwidth_hz is a bandwidth in Hz so that tx_phase_s * bandwidth_hz is
    a symbol blocklength.
    """

    frame_duration_s: float
    bandwidth_hz: float
    packet_size_bits: float
    tx_phase_s: float
    noise_psd: float = 1.0
    delay_bound_s: float = 8e-4

    def __post_init__(self):
        for name in ("frame_duration_s", "bandwidth_hz", "packet_size_bits",
                     "tx_phase_s", "noise_psd", "delay_bound_s"):
            if getattr(self, name) <= 0:
                raise DomainError(f"{name} must be > 0")
        if self.tx_phase_s > self.frame_duration_s:
            raise DomainError("tx_phase_s must not exceed frame_duration_s")
        n = self.blocklength
        if n < 1:
            raise DomainError(f"blocklength phi*B = {n} must be >= 1")
        if n < MIN_RELIABLE_BLOCKLENGTH:
            warnings.warn(
                f"blocklength phi*B = {n:g} is below "
                f"{MIN_RELIABLE_BLOCKLENGTH}; the normal approximation is "
                "unreliable at tiny blocklengths",
                stacklevel=2,
            )

    @classmethod
    def from_bytes(cls, frame_duration_s, bandwidth_hz, packet_size_bytes,
                   tx_phase_s, noise_psd=1.0, delay_bound_s=8e-4):
        return cls(frame_duration_s, bandwidth_hz, 8.0 * packet_size_bytes,
                   tx_phase_s, noise_psd, delay_bound_s)

    @property
    def blocklength(self) -> float:
        return self.tx_phase_s * self.bandwidth_hz


def channel_dispersion(gamma: float, mode: DispersionMode) -> float:
    """Channel dispersion V(gamma), in [0, 1), increasing in gamma."""
    if gamma < 0:
        raise DomainError("gamma must be >= 0")
    inv = 1.0 / (1.0 + gamma)
    if mode is DispersionMode.PAPER_LITERAL:
        return 1.0 - inv
    # via the reciprocal so huge-but-finite gamma cannot overflow the square
    return 1.0 - inv * inv


def achievable_packets(
    gamma: float,
    cfg: SystemConfig,
    eps_c: float,
    mode: DispersionMode = DispersionMode.PAPER_LITERAL,
) -> float:
    """Maximum packets per frame at SINR gamma with decoding error eps_c.

    s = (phi*B / (u ln 2)) * [ln(1+gamma) - sqrt(V/(phi*B)) * Qinv(eps_c)].
    May be negative; a non-positive value means the operating point is
    infeasible (see is_feasible).
    """
    check_probability(eps_c, "eps_c")
    if gamma < 0:
        raise DomainError("gamma must be >= 0")
    n = cfg.blocklength
    v = channel_dispersion(gamma, mode)
    penalty = math.sqrt(v / n) * inv_q_function(eps_c)
    return (n / (cfg.packet_size_bits * LN2)) * (math.log1p(gamma) - penalty)


def is_feasible(packets_per_frame: float) -> bool:
    """A non-positive packet count means no useful rate is achievable."""
    return packets_per_frame > 0.0


def transmission_error_probability(
    gamma: float,
    cfg: SystemConfig,
    packets_per_frame: float,
    mode: DispersionMode = DispersionMode.PAPER_LITERAL,
) -> float:
    """Decoding error probability when sending a fixed packet rate.

    Exact inverse of achievable_packets in its eps_c argument:
    eps = Q( sqrt(phi*B/V) * [ln(1+gamma) - s*u*ln2/(phi*B)] ).
    """
    if packets_per_frame < 0:
        raise DomainError("packets_per_frame must be >= 0")
    if gamma <= 0:
        if packets_per_frame > 0:
            raise DomainError("no rate is achievable at gamma = 0")
        raise DomainError("gamma must be > 0 (dispersion vanishes at 0)")
    n = cfg.blocklength
    v = channel_dispersion(gamma, mode)
    rate_gap = math.log1p(gamma) - packets_per_frame * cfg.packet_size_bits * LN2 / n
    return q_function(math.sqrt(n / v) * rate_gap)


def achievable_packets_oma(
    gamma: float,
    cfg: SystemConfig,
    eps_c: float,
    mode: DispersionMode = DispersionMode.PAPER_LITERAL,
) -> float:
    """Packets per frame for one of two users under an orthogonal split.

    The two-user orthogonal baseline halves the blocklength per user:
    s = (phi*B / (2u ln 2)) * [ln(1+gamma) - sqrt(2V/(phi*B)) * Qinv(eps_c)].
    """
    check_probability(eps_c, "eps_c")
    if gamma < 0:
        raise DomainError("gamma must be >= 0")
    n = cfg.blocklength
    v = channel_dispersion(gamma, mode)
    penalty = math.sqrt(2.0 * v / n) * inv_q_function(eps_c)
    return (n / (2.0 * cfg.packet_size_bits * LN2)) * (math.log1p(gamma) - penalty)

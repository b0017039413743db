"""Two-user power-domain NOMA SINR algebra.

SIC order: the weak user (index 2) decodes its own message under the strong
user's interference; the strong user (index 1) first decodes the weak
user's message, cancels it, then decodes its own interference-free.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .errors import DomainError, InfeasibleError


class SinrMode(Enum):
    """Denominator channel used for the strong user's pre-SIC decode.

    PAPER_LITERAL keeps the weak user's channel in the interference term
    (as printed); CORRECTED uses the strong user's own channel.
    """

    PAPER_LITERAL = "paper"
    CORRECTED = "corrected"


@dataclass(frozen=True)
class NomaLink:
    """Channel gains, power split, and transmit SNR for one link pair.

    Gains are linear channel powers |h|^2; the constructor reorders them
    so h1_sq >= h2_sq (strong user first) and records the swap.
    """

    h1_sq: float
    h2_sq: float
    alpha1: float = 0.2
    alpha2: float = 0.8
    rho: float = 1.0
    swapped: bool = field(default=False, compare=False)

    def __post_init__(self):
        if self.h1_sq <= 0 or self.h2_sq <= 0:
            raise DomainError("channel gains must be > 0")
        if self.h1_sq < self.h2_sq:
            object.__setattr__(self, "swapped", True)
            h1, h2 = self.h2_sq, self.h1_sq
            object.__setattr__(self, "h1_sq", h1)
            object.__setattr__(self, "h2_sq", h2)
        if not (0.0 < self.alpha1 < 1.0 and 0.0 < self.alpha2 < 1.0):
            raise DomainError("power coefficients must be in (0, 1)")
        if abs(self.alpha1 + self.alpha2 - 1.0) > 1e-12:
            raise DomainError("alpha1 + alpha2 must equal 1")
        if self.alpha2 <= self.alpha1:
            raise DomainError(
                "alpha2 must exceed alpha1 (the weak user's message needs "
                "the larger power share for SIC to be decodable)"
            )
        if self.rho <= 0:
            raise DomainError("rho must be > 0")


@dataclass(frozen=True)
class SinrTriple:
    """SINRs for the three decodes: (2,2) weak own, (1,2) strong pre-SIC,
    (1,1) strong own post-SIC."""

    gamma_22: float
    gamma_12: float
    gamma_11: float


def sinr_triple(link: NomaLink, mode: SinrMode = SinrMode.PAPER_LITERAL) -> SinrTriple:
    """SINR of each decode at transmit SNR link.rho."""
    a1, a2, rho = link.alpha1, link.alpha2, link.rho
    g22 = a2 * link.h2_sq * rho / (a1 * link.h2_sq * rho + 1.0)
    if mode is SinrMode.PAPER_LITERAL:
        g12 = a2 * link.h1_sq * rho / (a1 * link.h2_sq * rho + 1.0)
    else:
        g12 = a2 * link.h1_sq * rho / (a1 * link.h1_sq * rho + 1.0)
    g11 = a1 * rho * link.h1_sq
    return SinrTriple(gamma_22=g22, gamma_12=g12, gamma_11=g11)


def weak_user_sinr_ceiling(link: NomaLink) -> float:
    """Supremum of gamma_22 over all transmit powers: alpha2 / alpha1.

    Any weak-user SINR target at or above this is infeasible at any power.
    """
    return link.alpha2 / link.alpha1


def solve_rho_for_targets(
    h1_sq: float,
    h2_sq: float,
    alpha1: float,
    alpha2: float,
    target: SinrTriple,
    mode: SinrMode = SinrMode.PAPER_LITERAL,
) -> float:
    """Minimum transmit SNR rho meeting all three SINR targets.

    Each constraint inverts in closed form; the answer is the max of the
    three. Interference-limited constraints ((2,2) and, depending on mode,
    (1,2)) have finite ceilings and raise InfeasibleError at or above them.
    """
    link = NomaLink(h1_sq=h1_sq, h2_sq=h2_sq, alpha1=alpha1, alpha2=alpha2)
    h1, h2 = link.h1_sq, link.h2_sq
    t22, t12, t11 = target.gamma_22, target.gamma_12, target.gamma_11
    if min(t22, t12, t11) < 0:
        raise DomainError("SINR targets must be >= 0")

    rho11 = t11 / (alpha1 * h1)

    denom22 = h2 * (alpha2 - alpha1 * t22)
    if denom22 <= 0:
        raise InfeasibleError(
            f"gamma_22 target {t22!r} is at or above its ceiling "
            f"alpha2/alpha1 = {alpha2 / alpha1!r}"
        )
    rho22 = t22 / denom22

    # Pre-SIC decode at the strong user: numerator channel h1, interference
    # channel per mode.
    h_int = h2 if mode is SinrMode.PAPER_LITERAL else h1
    denom12 = alpha2 * h1 - alpha1 * h_int * t12
    if denom12 <= 0:
        ceiling = alpha2 * h1 / (alpha1 * h_int)
        raise InfeasibleError(
            f"gamma_12 target {t12!r} is at or above its ceiling "
            f"{ceiling!r} (alpha2*h1_sq/(alpha1*h_int_sq))"
        )
    rho12 = t12 / denom12

    return max(rho11, rho22, rho12)

"""Seeded Monte Carlo validation of the queueing approximation.

A discrete-time single-server FIFO queue: each frame draws Poisson(lambda)
packet arrivals, the server accrues `service_packets_per_frame` units of
credit per frame, and one packet departs per whole unit of credit. Credit
resets when the queue empties (a constant-rate server cannot bank idle
capacity). A packet arriving and departing in the same frame has a sojourn
of 1 frame.

RNG: numpy's Philox4x64 counter-based generator keyed by the config seed.
Substreams for sweeps use Philox's jumped() streams, so runs are bit-stable
across platforms and parallel execution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numba import njit

from .errors import DomainError, StabilityError
from .traffic import DelayBound, TrafficModel

_MAX_DELAY_BINS = 1 << 20


@dataclass(frozen=True)
class QueueSimConfig:
    seed: int
    num_frames: int
    service_packets_per_frame: float
    traffic: TrafficModel
    warmup_frames: int = -1  # -1 = default 1% of num_frames

    def __post_init__(self):
        if self.num_frames < 1:
            raise DomainError("num_frames must be >= 1")
        if self.service_packets_per_frame <= 0:
            raise DomainError("service_packets_per_frame must be > 0")
        if self.service_packets_per_frame <= self.traffic.mean_arrivals_per_frame:
            raise StabilityError(
                f"service rate {self.service_packets_per_frame}/frame does not "
                f"exceed mean arrivals "
                f"{self.traffic.mean_arrivals_per_frame}/frame: queue is unstable"
            )
        if self.warmup_frames < 0:
            object.__setattr__(self, "warmup_frames", self.num_frames // 100)
        if self.warmup_frames >= self.num_frames:
            raise DomainError("warmup_frames must be < num_frames")


@dataclass(frozen=True)
class DelayHistogram:
    """Per-packet sojourn times binned in whole frames.

    counts[d] is the number of counted packets with sojourn d frames.
    total_packets counts only post-warmup departures; arrived/departed/
    left_in_queue cover the whole run for the conservation check.
    """

    counts: np.ndarray
    total_packets: int
    arrived: int = 0
    departed: int = 0
    left_in_queue: int = 0

    def ccdf(self) -> np.ndarray:
        """Empirical P(sojourn > d) for d = 0 .. len(counts)-1."""
        if self.total_packets == 0:
            return np.zeros(len(self.counts))
        tail = np.cumsum(self.counts[::-1])[::-1]
        exceed = np.empty(len(self.counts))
        exceed[:-1] = tail[1:]
        exceed[-1] = 0
        return exceed / self.total_packets

    def to_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("delay_frames,count\n")
            for d, c in enumerate(self.counts):
                if c:
                    fh.write(f"{d},{int(c)}\n")


@njit(cache=True)
def _run_queue(arrivals, service, warmup, counts):  # pragma: no cover
    total = 0
    for t in range(arrivals.shape[0]):
        total += arrivals[t]
    buf = np.empty(total, np.int64)
    head = 0
    tail = 0
    credit = 0.0
    counted = 0
    departed = 0
    nbins = counts.shape[0]
    for t in range(arrivals.shape[0]):
        # Service first: packets never depart in their arrival frame, so
        # every sojourn is at least one full frame. Credit accrues only
        # while a packet is in service and is dropped when the queue
        # empties (a constant-rate server cannot bank idle capacity).
        if head < tail:
            credit += service
            while credit >= 1.0 and head < tail:
                at = buf[head]
                head += 1
                credit -= 1.0
                departed += 1
                d = t - at
                if at >= warmup:
                    if d >= nbins:
                        d = nbins - 1
                    counts[d] += 1
                    counted += 1
            if head == tail:
                credit = 0.0
        a = arrivals[t]
        for _ in range(a):
            buf[tail] = t
            tail += 1
    return total, departed, counted, tail - head


def simulate_queue(cfg: QueueSimConfig, arrivals=None) -> DelayHistogram:
    """Run the queue and return the sojourn-time histogram.

    Deterministic given the seed. Packets arriving during warmup are
    simulated (they shape the queue state) but excluded from the counts.
    `arrivals` overrides the Poisson draw with a fixed per-frame arrival
    array (testing hook for degenerate traffic patterns).
    """
    if arrivals is None:
        rng = np.random.Generator(np.random.Philox(key=cfg.seed))
        arrivals = rng.poisson(
            cfg.traffic.mean_arrivals_per_frame, cfg.num_frames
        )
    arrivals = np.asarray(arrivals).astype(np.int64)
    if len(arrivals) != cfg.num_frames:
        raise DomainError("arrivals array must have one entry per frame")
    counts = np.zeros(_MAX_DELAY_BINS, dtype=np.int64)
    arrived, departed, counted, in_queue = _run_queue(
        arrivals, cfg.service_packets_per_frame, cfg.warmup_frames, counts
    )
    assert arrived == departed + in_queue, "packet conservation violated"
    last = int(np.max(np.nonzero(counts)[0])) if counted else 0
    return DelayHistogram(
        counts=counts[: last + 1].copy(),
        total_packets=counted,
        arrived=int(arrived),
        departed=int(departed),
        left_in_queue=int(in_queue),
    )


def wilson_interval(k: int, n: int, z: float = 1.959963984540054) -> tuple[float, float]:
    """Wilson 95% score interval for a binomial proportion."""
    if n == 0:
        raise DomainError("empty sample")
    phat = k / n
    denom = 1.0 + z * z / n
    center = (phat + z * z / (2 * n)) / denom
    half = (z / denom) * math.sqrt(phat * (1 - phat) / n + z * z / (4 * n * n))
    lo = 0.0 if k == 0 else max(center - half, 0.0)
    hi = 1.0 if k == n else min(center + half, 1.0)
    return lo, hi


@dataclass(frozen=True)
class ViolationEstimate:
    probability: float
    ci_low: float
    ci_high: float
    exceeding: int
    total: int


def empirical_violation(
    hist: DelayHistogram,
    bound: DelayBound | float,
    frame_duration_s: float,
) -> ViolationEstimate:
    """Fraction of packets whose sojourn exceeds the delay bound.

    The bound (DelayBound or plain seconds, 0 allowed) is converted to
    whole frames with a ceiling; a zero bound is violated by every packet
    since every sojourn is >= 1 frame.
    """
    d_max_s = bound.d_max_s if isinstance(bound, DelayBound) else float(bound)
    if d_max_s < 0:
        raise DomainError("delay bound must be >= 0")
    # Epsilon guard: an exact multiple of the frame duration must not round
    # up to an extra frame through floating noise.
    bound_frames = math.ceil(d_max_s / frame_duration_s - 1e-12)
    return empirical_violation_frames(hist, bound_frames)


def empirical_violation_frames(
    hist: DelayHistogram, bound_frames: int
) -> ViolationEstimate:
    """Fraction of packets whose sojourn exceeds bound_frames frames."""
    if hist.total_packets == 0:
        raise DomainError("histogram holds no packets")
    exceeding = int(hist.counts[bound_frames + 1:].sum())
    lo, hi = wilson_interval(exceeding, hist.total_packets)
    return ViolationEstimate(
        probability=exceeding / hist.total_packets,
        ci_low=lo,
        ci_high=hi,
        exceeding=exceeding,
        total=hist.total_packets,
    )


def rayleigh_gains(seed: int, count: int, mean_gain: float) -> np.ndarray:
    """Rayleigh-fading channel power pairs, ordered strong-first.

    |h|^2 of a Rayleigh channel is exponential; draws i.i.d. pairs with the
    given mean and sorts each pair descending. Returns shape (count, 2).
    """
    if mean_gain <= 0:
        raise DomainError("mean_gain must be > 0")
    if count < 1:
        raise DomainError("count must be >= 1")
    rng = np.random.Generator(np.random.Philox(key=seed))
    pairs = rng.exponential(mean_gain, size=(count, 2))
    pairs.sort(axis=1)
    return pairs[:, ::-1].copy()

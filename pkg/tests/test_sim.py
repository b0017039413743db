import numpy as np
import pytest

from nomaplan.errors import DomainError, StabilityError
from nomaplan.sim import (
    DelayHistogram,
    QueueSimConfig,
    empirical_violation,
    rayleigh_gains,
    simulate_queue,
    wilson_interval,
)
from nomaplan.traffic import DelayBound, TrafficModel
from nomaplan.validate import (
    analytic_decay_per_frame,
    operating_point_theta,
    validate_queue_approximation,
)

FRAME = 5e-4


def make_cfg(lam=0.5, service=1.0, frames=100_000, seed=42, warmup=-1):
    return QueueSimConfig(
        seed=seed,
        num_frames=frames,
        service_packets_per_frame=service,
        traffic=TrafficModel(lam, FRAME),
        warmup_frames=warmup,
    )


def test_empty_source():
    hist = simulate_queue(make_cfg(lam=0.0, frames=1000))
    assert hist.total_packets == 0
    assert hist.arrived == 0


def test_lockstep_all_delays_one_frame():
    cfg = make_cfg(lam=0.5, service=1.0, frames=5000, warmup=0)
    hist = simulate_queue(cfg, arrivals=np.ones(5000, dtype=np.int64))
    assert hist.total_packets + hist.left_in_queue == 5000
    # every counted packet waited exactly one frame
    assert hist.counts[1] == hist.total_packets
    assert hist.counts[2:].sum() == 0


def test_determinism():
    h1 = simulate_queue(make_cfg())
    h2 = simulate_queue(make_cfg())
    assert h1.total_packets == h2.total_packets
    assert np.array_equal(h1.counts, h2.counts)
    h3 = simulate_queue(make_cfg(seed=7))
    assert not np.array_equal(h1.counts, h3.counts)


def test_conservation():
    hist = simulate_queue(make_cfg(frames=50_000))
    assert hist.arrived == hist.departed + hist.left_in_queue
    assert int(hist.counts.sum()) == hist.total_packets


def test_stability_precheck():
    with pytest.raises(StabilityError):
        make_cfg(lam=1.1, service=1.0)
    with pytest.raises(StabilityError):
        make_cfg(lam=1.0, service=1.0)  # equality is unstable too


def test_fractional_service_credit():
    # service 0.5/frame, single packet: needs two frames of credit
    cfg = make_cfg(lam=0.2, service=0.5, frames=10, warmup=0)
    arrivals = np.zeros(10, dtype=np.int64)
    arrivals[0] = 1
    hist = simulate_queue(cfg, arrivals=arrivals)
    assert hist.total_packets == 1
    assert hist.counts[2] == 1


def test_violation_monotone_in_bound():
    hist = simulate_queue(make_cfg(frames=200_000))
    probs = [empirical_violation(hist, d * FRAME, FRAME).probability
             for d in range(0, 8)]
    assert all(a >= b for a, b in zip(probs, probs[1:]))


def test_violation_trivial_bounds():
    hist = simulate_queue(make_cfg(frames=50_000))
    big = (len(hist.counts) + 5) * FRAME
    est = empirical_violation(hist, big, FRAME)
    assert est.probability == 0.0
    assert est.ci_low == 0.0 and est.ci_high < 1e-3
    est0 = empirical_violation(hist, 0.0, FRAME)
    assert est0.probability == 1.0


def test_violation_accepts_delay_bound_type():
    hist = simulate_queue(make_cfg(frames=50_000))
    a = empirical_violation(hist, DelayBound(8e-4), FRAME)
    b = empirical_violation(hist, 8e-4, FRAME)
    assert a == b


def test_violation_empty_histogram():
    hist = DelayHistogram(counts=np.zeros(4, dtype=np.int64), total_packets=0)
    with pytest.raises(DomainError):
        empirical_violation(hist, 1e-3, FRAME)


def test_ccdf_nonincreasing():
    hist = simulate_queue(make_cfg(frames=100_000))
    ccdf = hist.ccdf()
    assert all(a >= b for a, b in zip(ccdf, ccdf[1:]))


def test_histogram_csv_export(tmp_path):
    hist = simulate_queue(make_cfg(frames=20_000))
    path = tmp_path / "hist.csv"
    hist.to_csv(path)
    lines = path.read_text().splitlines()
    assert lines[0] == "delay_frames,count"
    total = sum(int(line.split(",")[1]) for line in lines[1:])
    assert total == hist.total_packets


def test_wilson_interval_basic():
    lo, hi = wilson_interval(50, 100)
    assert lo < 0.5 < hi
    lo0, hi0 = wilson_interval(0, 100)
    assert lo0 == 0.0 and hi0 > 0.0


def test_operating_point_theta():
    tm = TrafficModel(0.5, FRAME)
    theta = operating_point_theta(tm, 1.0)
    # lambda (e^theta - 1) / theta = service  =>  e^theta - 1 = 2 theta
    assert abs(0.5 * (np.expm1(theta)) / theta - 1.0) < 1e-10
    assert abs(analytic_decay_per_frame(tm, 1.0) - theta * 1.0) < 1e-12


def test_validation_medium_run():
    cfg = make_cfg(frames=2_000_000)
    hist = simulate_queue(cfg)
    report = validate_queue_approximation(cfg, hist)
    assert report.slope_ok
    assert report.bounds_ok
    assert report.passed


def test_warmup_default_one_percent():
    cfg = make_cfg(frames=10_000)
    assert cfg.warmup_frames == 100


def test_rayleigh_ordering_and_determinism():
    pairs = rayleigh_gains(seed=1, count=1000, mean_gain=2.0)
    assert pairs.shape == (1000, 2)
    assert np.all(pairs[:, 0] >= pairs[:, 1])
    assert np.array_equal(pairs, rayleigh_gains(seed=1, count=1000, mean_gain=2.0))


def test_rayleigh_mean():
    pairs = rayleigh_gains(seed=2, count=500_000, mean_gain=3.0)
    assert abs(pairs.mean() - 3.0) / 3.0 < 0.01


def test_rayleigh_domain():
    with pytest.raises(DomainError):
        rayleigh_gains(seed=1, count=0, mean_gain=1.0)
    with pytest.raises(DomainError):
        rayleigh_gains(seed=1, count=1, mean_gain=0.0)

import math

import pytest

from nomaplan.errors import DomainError, InfeasibleError
from nomaplan.traffic import (
    DelayBound,
    QosExponent,
    TrafficModel,
    delay_violation_probability,
    effective_bandwidth,
    solve_qos_exponent,
)

TABLE_TRAFFIC = TrafficModel(0.01, 5e-4)
BOUND = DelayBound(8e-4)


def log_mgf_by_summation(lam: float, theta: float) -> float:
    """Oracle: ln E[e^{theta A}] by direct summation of the Poisson pmf.

    Sums E[e^{theta A}] - 1 = sum_k pmf(k) * (e^{theta k} - 1) and applies
    log1p, so small exponents keep full relative precision.
    """
    excess = 0.0
    pmf = math.exp(-lam)
    k = 0
    while True:
        term = pmf * math.expm1(theta * k)
        excess += term
        k += 1
        pmf *= lam / k
        if pmf < 1e-300 or (k > 10 * (lam + 1) and term < 1e-16 * max(excess, 1e-300)):
            break
    return math.log1p(excess)


@pytest.mark.parametrize("lam", [0.01, 0.5, 5.0])
@pytest.mark.parametrize("theta", [1e-3, 0.1, 1.0])
def test_effective_bandwidth_matches_pmf_summation(lam, theta):
    tm = TrafficModel(lam, 5e-4)
    closed = effective_bandwidth(tm, QosExponent(theta))
    oracle = log_mgf_by_summation(lam, theta) / (5e-4 * theta)
    assert abs(closed - oracle) / oracle < 1e-12


def test_effective_bandwidth_table_point():
    # 0.01 * (e^0.1 - 1) / (5e-4 * 0.1)
    eb = effective_bandwidth(TABLE_TRAFFIC, QosExponent(0.1))
    assert abs(eb - 21.034183615129525) < 1e-9
    assert abs(eb - 21.034) < 1e-3


def test_effective_bandwidth_small_theta_limit():
    eb = effective_bandwidth(TABLE_TRAFFIC, QosExponent(1e-9))
    mean_rate = TABLE_TRAFFIC.mean_rate
    assert abs(eb - mean_rate) / mean_rate < 1e-6
    assert mean_rate == 20.0


def test_effective_bandwidth_empty_source():
    tm = TrafficModel(0.0, 5e-4)
    for theta in (1e-3, 0.1, 1.0, 10.0):
        assert effective_bandwidth(tm, QosExponent(theta)) == 0.0


def test_effective_bandwidth_increasing_in_theta():
    tm = TrafficModel(0.3, 1e-3)
    ladder = [1e-4, 1e-3, 1e-2, 0.1, 0.5, 1.0, 2.0, 5.0]
    values = [effective_bandwidth(tm, QosExponent(t)) for t in ladder]
    assert all(a < b for a, b in zip(values, values[1:]))


def test_qos_exponent_domain():
    with pytest.raises(DomainError):
        QosExponent(0.0)
    with pytest.raises(DomainError):
        QosExponent(-1.0)


def test_delay_violation_table_point():
    p = delay_violation_probability(TABLE_TRAFFIC, QosExponent(0.1), BOUND)
    assert abs(p - math.exp(-0.1 * 21.034183615129525 * 8e-4)) < 1e-15
    assert abs(p - 0.99832) < 1e-5


def test_delay_violation_tiny_bound_tends_to_one():
    p = delay_violation_probability(TABLE_TRAFFIC, QosExponent(0.1), DelayBound(1e-300))
    assert abs(p - 1.0) < 1e-12


def test_delay_violation_log_identity():
    qos = QosExponent(0.7)
    tm = TrafficModel(0.4, 2e-3)
    bound = DelayBound(5e-3)
    p = delay_violation_probability(tm, qos, bound)
    expected_log = -qos.theta * effective_bandwidth(tm, qos) * bound.d_max_s
    assert abs(math.log(p) - expected_log) < 1e-12


def test_delay_violation_doubling_squares():
    qos = QosExponent(0.3)
    tm = TrafficModel(0.2, 1e-3)
    p1 = delay_violation_probability(tm, qos, DelayBound(2e-3))
    p2 = delay_violation_probability(tm, qos, DelayBound(4e-3))
    assert abs(p2 - p1 * p1) < 1e-15


def test_delay_violation_composition():
    qos = QosExponent(0.9)
    tm = TrafficModel(1.5, 1e-3)
    d1, d2 = 1e-3, 3e-3
    pa = delay_violation_probability(tm, qos, DelayBound(d1))
    pb = delay_violation_probability(tm, qos, DelayBound(d2))
    pc = delay_violation_probability(tm, qos, DelayBound(d1 + d2))
    assert abs(pc - pa * pb) < 1e-12


def test_delay_violation_in_unit_interval():
    for theta in (1e-6, 0.1, 10.0):
        p = delay_violation_probability(TABLE_TRAFFIC, QosExponent(theta), BOUND)
        assert 0.0 < p <= 1.0


def test_eta_hook():
    p1 = delay_violation_probability(TABLE_TRAFFIC, QosExponent(0.1), BOUND)
    p2 = delay_violation_probability(TABLE_TRAFFIC, QosExponent(0.1), BOUND, eta=0.5)
    assert abs(p2 - 0.5 * p1) < 1e-15
    with pytest.raises(DomainError):
        delay_violation_probability(TABLE_TRAFFIC, QosExponent(0.1), BOUND, eta=1.5)


def test_solve_qos_exponent_unit_exponent():
    # target exp(-1) means theta * E_B(theta) * D = 1
    qos = solve_qos_exponent(TABLE_TRAFFIC, BOUND, math.exp(-1.0))
    eb = effective_bandwidth(TABLE_TRAFFIC, qos)
    assert abs(qos.theta * eb * BOUND.d_max_s - 1.0) < 1e-10


@pytest.mark.parametrize("theta", [0.01, 0.1, 1.0])
def test_solve_qos_exponent_round_trip(theta):
    p = delay_violation_probability(TABLE_TRAFFIC, QosExponent(theta), BOUND)
    solved = solve_qos_exponent(TABLE_TRAFFIC, BOUND, p)
    assert abs(solved.theta - theta) / theta < 1e-8


def test_solve_qos_exponent_lenient_target_small_theta():
    tiny = DelayBound(1e-7)
    qos = solve_qos_exponent(TrafficModel(0.5, 5e-4), tiny, 0.999999)
    assert qos.theta > 0
    p = delay_violation_probability(TrafficModel(0.5, 5e-4), qos, tiny)
    assert abs(p - 0.999999) < 1e-9


def test_solve_qos_exponent_infeasible_reports_range():
    # A target so close to 1 that theta would fall below 1e-12.
    with pytest.raises(InfeasibleError) as exc:
        solve_qos_exponent(TrafficModel(1e6, 5e-4), DelayBound(1.0), 1 - 1e-15)
    assert "achievable" in str(exc.value)


def test_solve_qos_exponent_rejects_empty_source():
    with pytest.raises(InfeasibleError):
        solve_qos_exponent(TrafficModel(0.0, 5e-4), BOUND, 0.5)


def test_traffic_model_invariants():
    with pytest.raises(DomainError):
        TrafficModel(-0.1, 5e-4)
    with pytest.raises(DomainError):
        TrafficModel(0.1, 0.0)
    with pytest.raises(DomainError):
        DelayBound(0.0)

import random

import pytest

from nomaplan.errors import DomainError, InfeasibleError
from nomaplan.noma import (
    NomaLink,
    SinrMode,
    SinrTriple,
    sinr_triple,
    solve_rho_for_targets,
    weak_user_sinr_ceiling,
)

LIT = SinrMode.PAPER_LITERAL
COR = SinrMode.CORRECTED


def random_link(rng):
    h2 = rng.uniform(0.05, 5.0)
    h1 = h2 * rng.uniform(1.0, 20.0)
    a1 = rng.uniform(0.05, 0.45)
    return NomaLink(h1_sq=h1, h2_sq=h2, alpha1=a1, alpha2=1.0 - a1,
                    rho=10 ** rng.uniform(-1, 3))


def test_hand_computed_triple():
    link = NomaLink(h1_sq=2, h2_sq=1, alpha1=0.2, alpha2=0.8, rho=10)
    t = sinr_triple(link, LIT)
    assert t.gamma_22 == pytest.approx(8 / 3, rel=1e-14)
    assert t.gamma_12 == pytest.approx(16 / 3, rel=1e-14)
    assert t.gamma_11 == pytest.approx(4.0, rel=1e-14)


def test_equal_channels_collapse():
    link = NomaLink(h1_sq=1.7, h2_sq=1.7, alpha1=0.3, alpha2=0.7, rho=5.0)
    t = sinr_triple(link, LIT)
    assert t.gamma_12 == t.gamma_22


def test_gamma12_dominates_gamma22_literal():
    rng = random.Random(5)
    for _ in range(200):
        t = sinr_triple(random_link(rng), LIT)
        assert t.gamma_12 >= t.gamma_22


def test_monotone_in_rho():
    rng = random.Random(6)
    base = random_link(rng)
    for mode in (LIT, COR):
        prev = None
        for rho in (0.1, 1.0, 10.0, 100.0, 1000.0):
            link = NomaLink(base.h1_sq, base.h2_sq, base.alpha1, base.alpha2, rho)
            t = sinr_triple(link, mode)
            if prev is not None:
                assert t.gamma_22 >= prev.gamma_22
                assert t.gamma_12 >= prev.gamma_12
                assert t.gamma_11 >= prev.gamma_11
            prev = t


def test_weak_user_ceiling():
    link = NomaLink(h1_sq=2, h2_sq=1, alpha1=0.2, alpha2=0.8, rho=1.0)
    assert weak_user_sinr_ceiling(link) == 4.0
    # gamma_22 approaches but never reaches the ceiling
    big = NomaLink(h1_sq=2, h2_sq=1, alpha1=0.2, alpha2=0.8, rho=1e9)
    g22 = sinr_triple(big, LIT).gamma_22
    assert g22 < 4.0
    assert abs(g22 - 4.0) / 4.0 < 1e-6


def test_ceiling_limit_balanced_split():
    delta = 1e-6
    link = NomaLink(h1_sq=1, h2_sq=1, alpha1=0.5 - delta, alpha2=0.5 + delta)
    assert weak_user_sinr_ceiling(link) == pytest.approx(1.0, abs=1e-5)


def test_solve_rho_zero_targets():
    rho = solve_rho_for_targets(2, 1, 0.2, 0.8, SinrTriple(0, 0, 0), LIT)
    assert rho == 0.0


def test_solve_rho_ceiling_infeasible():
    with pytest.raises(InfeasibleError):
        solve_rho_for_targets(2, 1, 0.2, 0.8, SinrTriple(4.0, 0, 0), LIT)


@pytest.mark.parametrize("mode", [LIT, COR])
def test_forward_inverse_round_trip(mode):
    rng = random.Random(7)
    for _ in range(500):
        link = random_link(rng)
        t = sinr_triple(link, mode)
        rho = solve_rho_for_targets(
            link.h1_sq, link.h2_sq, link.alpha1, link.alpha2, t, mode
        )
        assert abs(rho - link.rho) / link.rho < 1e-9


def test_constructor_reorders_and_flags():
    link = NomaLink(h1_sq=1, h2_sq=3)
    assert link.h1_sq == 3 and link.h2_sq == 1 and link.swapped


def test_constructor_invariants():
    with pytest.raises(DomainError):
        NomaLink(h1_sq=1, h2_sq=1, alpha1=0.5, alpha2=0.5)  # no power gap
    with pytest.raises(DomainError):
        NomaLink(h1_sq=1, h2_sq=1, alpha1=0.6, alpha2=0.4)  # weak user starved
    with pytest.raises(DomainError):
        NomaLink(h1_sq=1, h2_sq=1, alpha1=0.3, alpha2=0.8)  # not a unit split
    with pytest.raises(DomainError):
        NomaLink(h1_sq=0, h2_sq=1)
    with pytest.raises(DomainError):
        NomaLink(h1_sq=1, h2_sq=1, rho=0.0)


def test_negative_targets_rejected():
    with pytest.raises(DomainError):
        solve_rho_for_targets(2, 1, 0.2, 0.8, SinrTriple(-1, 0, 0), LIT)

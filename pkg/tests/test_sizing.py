import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.optimize import brentq

from reference_tables import entries
from websize.desim import rr_schedule
from websize.errors import DomainError, InfeasibleSizing
from websize.queueing import PageProfile, h2_wait, tdm_wait
from websize.sizing import (DelayModel, SizingResult, WorkloadParams,
                            h2_feasibility_bound, h2_slot, integerize_users, n_for_h2,
                            n_for_tdm, object_size, packets_for_size, round_half_up,
                            rr_wait, segment_gap, size_ratio, solve_users_raw)

LOADS = [0.01, 0.05, 0.1, 0.2, 0.3, 0.4, 0.5]


def users_by_root_finding(lam, n):
    # m where the TDM delay meets the H2 delay, found numerically
    target = h2_wait(PageProfile(lam, n))
    return brentq(lambda m: tdm_wait(lam, m) - target, 1e-9, 1e9, xtol=1e-14, rtol=1e-14)


def n_tdm_exact(m, lam):
    # solve (m-1)(2n-1)/2 = m/(2(1-lam)) for n in rationals
    lam = Fraction(lam)
    return (Fraction(m) / (1 - lam) / (m - 1) + 1) / 2


def n_h2_exact(m, big_n):
    # solve (m-1)(2n-1)/2 * 2/(n(N+1)lam) = (N+1)/(lam(N-1)N); lam cancels
    # => (m-1)(2n-1)(N-1)N = n(N+1)^2
    a = (m - 1) * (big_n - 1) * big_n
    return Fraction(a, 2 * a - (big_n + 1) ** 2)


# ---------------------------------------------------------------- users

@pytest.mark.parametrize("lam, n, expected", [(0.01, 2, 297.0), (0.1, 2, 27.0), (0.05, 9, 19 / 3.6)])
def test_solve_users_raw_examples(lam, n, expected):
    assert solve_users_raw(lam, n) == pytest.approx(expected, rel=1e-12)
    assert solve_users_raw(lam, n) == pytest.approx(users_by_root_finding(lam, n), rel=1e-10)


@pytest.mark.parametrize("lam, n", [(0.0, 2), (1.0, 2), (0.5, 1)])
def test_solve_users_raw_domain(lam, n):
    with pytest.raises(DomainError):
        solve_users_raw(lam, n)


@given(lam=st.floats(1e-4, 0.999), n=st.integers(2, 1000))
def test_users_equalize_tdm_and_h2(lam, n):
    m = solve_users_raw(lam, n)
    assert math.isclose(tdm_wait(lam, m), h2_wait(PageProfile(lam, n)), rel_tol=1e-12)


@pytest.mark.parametrize("lam", LOADS)
def test_users_strictly_decreasing_in_n(lam):
    values = [solve_users_raw(lam, n) for n in range(2, 101)]
    assert all(b < a for a, b in zip(values, values[1:]))


@pytest.mark.parametrize("m_raw, expected", [(297.0, 297), (19 / 3.6, 6), (2.5, 3), (82.5, 83)])
def test_integerize_users(m_raw, expected):
    assert integerize_users(m_raw) == expected


def test_integerize_users_ignores_float_noise():
    assert integerize_users(12.000000000000002) == 12
    assert integerize_users(11.999999999999998) == 12


def test_integerize_reproduces_rows_needing_ceiling():
    # floor or nearest would give m = 5 / m = 2 here; only the ceiling matches the tables
    assert object_size(WorkloadParams(0.05, 9, 1460), DelayModel.TDM_VACATION).theta == 1652
    assert object_size(WorkloadParams(0.1, 9, 1460), DelayModel.TDM_VACATION).theta == 1947
    alt = round_half_up(n_for_tdm(5, 0.05) * 1460)
    assert alt != 1652


# ---------------------------------------------------------------- packets / round robin

@pytest.mark.parametrize("theta, mss, expected", [(0, 1460, 0), (1460, 1460, 1), (1470, 1460, 2),
                                                  (2920, 1460, 2), (2921, 1460, 3), (1.5, 1, 2)])
def test_packets_for_size(theta, mss, expected):
    assert packets_for_size(theta, mss) == expected


@pytest.mark.parametrize("m, n, tau, expected", [(1, 7, 3.0, 0.0), (2, 1, 1.0, 0.5), (3, 2, 1.0, 3.0)])
def test_rr_wait_examples(m, n, tau, expected):
    assert rr_wait(m, n, tau) == expected


def test_rr_wait_equals_explicit_schedule_everywhere():
    for tau in (0.5, 1.0, 2.0):
        for m in range(1, 51):
            for n in range(1, 51):
                sched = rr_schedule(m, n, tau)
                assert math.isclose(sched.mean_wait, rr_wait(m, n, tau), rel_tol=1e-12, abs_tol=0)


# ---------------------------------------------------------------- packet-count solvers

def test_n_for_tdm_examples():
    assert n_for_tdm(297, 0.01) == pytest.approx(float(n_tdm_exact(297, 0.01)), rel=1e-14)
    assert n_for_tdm(297, 0.01) == pytest.approx(1.006757, abs=5e-7)
    assert round_half_up(n_for_tdm(297, 0.01) * 1460) == 1470
    assert n_for_tdm(27, 0.1) == pytest.approx(50.4 / 46.8, rel=1e-14)
    assert round_half_up(n_for_tdm(27, 0.1) * 1460) == 1572
    assert n_for_tdm(2, 1e-12) == pytest.approx(1.5, rel=1e-9)


def test_n_for_tdm_domain():
    with pytest.raises(DomainError):
        n_for_tdm(1, 0.1)
    with pytest.raises(DomainError):
        n_for_tdm(5, 1.0)


def test_n_for_h2_examples():
    assert n_for_h2(297, 2) == pytest.approx(592 / 1175, rel=1e-14)
    assert float(n_h2_exact(297, 2)) == pytest.approx(592 / 1175, rel=1e-15)
    assert round_half_up(n_for_h2(297, 2) * 1460) == 736
    assert n_for_h2(3, 8) == pytest.approx(112 / 143, rel=1e-14)
    assert round_half_up(n_for_h2(3, 8) * 1460) == 1143


def test_n_for_h2_infeasible_carries_bound():
    with pytest.raises(InfeasibleSizing) as info:
        n_for_h2(2, 2)
    assert info.value.users == 2
    assert info.value.bound == pytest.approx(3.25)
    assert "3.25" in str(info.value)
    assert h2_feasibility_bound(2) == 3.25


def test_h2_feasibility_boundary():
    # m must exceed the bound strictly; 4 > 3.25 is the first feasible count at N = 2
    assert n_for_h2(4, 2) > 0
    with pytest.raises(InfeasibleSizing):
        n_for_h2(3, 2)


@pytest.mark.parametrize("lam", LOADS)
def test_tdm_round_trip(lam):
    for m in range(2, 501):
        n = n_for_tdm(m, lam)
        assert n == pytest.approx(float(n_tdm_exact(m, lam)), rel=1e-13)
        assert math.isclose(rr_wait(m, n, 1.0), tdm_wait(lam, m), rel_tol=1e-12)


@pytest.mark.parametrize("lam", LOADS)
def test_h2_round_trip(lam):
    for big_n in range(2, 10):
        target = h2_wait(PageProfile(lam, big_n))
        for m in range(2, 501):
            if m <= h2_feasibility_bound(big_n):
                continue
            n = n_for_h2(m, big_n)
            assert n == pytest.approx(float(n_h2_exact(m, big_n)), rel=1e-13)
            assert math.isclose(rr_wait(m, n, h2_slot(n, lam, big_n)), target, rel_tol=1e-12)


# ---------------------------------------------------------------- object size

def test_object_size_fields():
    res = object_size(WorkloadParams(0.01, 2, 1460), DelayModel.TDM_VACATION)
    assert isinstance(res, SizingResult)
    assert res.m_raw == pytest.approx(297.0, rel=1e-14)
    assert (res.m, res.theta) == (297, 1470)
    assert res.theta_raw == pytest.approx(res.n * 1460, rel=1e-15)
    assert res.m == math.ceil(res.m_raw - 1e-9)


@pytest.mark.parametrize("load, n, mss, model, theta", [
    (0.01, 2, 1460, DelayModel.TDM_VACATION, 1470),
    (0.05, 9, 1460, DelayModel.H2, 848),
    (0.1, 8, 536, DelayModel.H2, 420),
])
def test_object_size_examples(load, n, mss, model, theta):
    assert object_size(WorkloadParams(load, n, mss), model).theta == theta


@pytest.mark.parametrize("load, n, mss, model, theta", list(entries()))
def test_object_size_reproduces_tables(load, n, mss, model, theta):
    assert object_size(WorkloadParams(load, n, mss), DelayModel.parse(model)).theta == theta


def test_object_size_propagates_infeasibility():
    with pytest.raises(InfeasibleSizing):
        object_size(WorkloadParams(0.6, 9, 1460), DelayModel.H2)
    with pytest.raises(InfeasibleSizing):
        object_size(WorkloadParams(0.6, 9, 1460), DelayModel.TDM_VACATION)


def test_workload_params_validation():
    for bad in [(0.0, 2, 1460), (1.0, 2, 1460), (0.1, 1, 1460), (0.1, 2, 0), (0.1, 2.5, 1460)]:
        with pytest.raises(DomainError):
            WorkloadParams(*bad)


@pytest.mark.parametrize("model", list(DelayModel))
def test_theta_raw_linear_in_mss(model):
    for load in (0.01, 0.05, 0.1):
        for n in range(2, 10):
            base = object_size(WorkloadParams(load, n, 1), model).theta_raw
            for mss in (536, 1460, 9000):
                got = object_size(WorkloadParams(load, n, mss), model).theta_raw
                assert got == pytest.approx(base * mss, rel=1e-14)


def test_size_ratio():
    r = size_ratio(WorkloadParams(0.01, 2, 1460))
    assert r == pytest.approx(float(n_tdm_exact(297, 0.01) / n_h2_exact(297, 2)), rel=1e-13)
    assert r == pytest.approx(1.998, abs=5e-4)
    for load in (0.01, 0.05, 0.1, 0.2):
        for n in range(2, 10):
            assert size_ratio(WorkloadParams(load, n, 1460)) == size_ratio(WorkloadParams(load, n, 536))


@pytest.mark.parametrize("mss", [1460, 536])
@pytest.mark.parametrize("model", list(DelayModel))
def test_size_grows_with_load_on_reference_grid(mss, model):
    for n in range(2, 10):
        sizes = [object_size(WorkloadParams(load, n, mss), model).theta for load in (0.01, 0.05, 0.1)]
        assert sizes == sorted(sizes)


@pytest.mark.parametrize("load, n, mss, model, theta", list(entries()))
def test_segment_gap_matches_exact_arithmetic(load, n, mss, model, theta):
    # the slot cancels: gap = (2 * whole - 1) / (2n - 1) - 1 with n exact
    m = integerize_users(solve_users_raw(load, n))
    exact_n = n_tdm_exact(m, load) if model == "tdm" else n_h2_exact(m, n)
    whole = -(-theta // mss)
    expected = Fraction(2 * whole - 1) / (2 * exact_n - 1) - 1
    got = segment_gap(WorkloadParams(load, n, mss), DelayModel.parse(model))
    assert got == pytest.approx(float(expected), rel=1e-12, abs=1e-12)


def test_segment_gap_tdm_light_load():
    # 1470 bytes need two 1460-byte segments while n is barely above 1
    assert segment_gap(WorkloadParams(0.01, 2, 1460), DelayModel.TDM_VACATION) == pytest.approx(1.96, abs=0.01)


def test_delay_model_parse():
    assert DelayModel.parse("TDM") is DelayModel.TDM_VACATION
    assert DelayModel.parse("tdm_vacation") is DelayModel.TDM_VACATION
    assert DelayModel.parse("h2") is DelayModel.H2
    with pytest.raises(DomainError):
        DelayModel.parse("fdm")


@given(x=st.floats(0, 1e9))
def test_round_half_up(x):
    r = round_half_up(x)
    assert r - 0.5 <= x < r + 0.5

import numpy as np
import pytest
from hypothesis import given, strategies as st

from symcat import autodiff as ad, optdyn, symgrp
from symcat.errors import EmptyTrajectory, NonConvergence, NonFinite

SW = symgrp.swap_rep()


# -- gradients ----------------------------------------------------------------------

def test_gradient_examples():
    theta = np.array([0.5, -1.0, 2.0])
    np.testing.assert_array_equal(optdyn.gradient(optdyn.quad_loss(), theta), theta)
    f = optdyn.DiffFunction(lambda t: ad.sin(t[0] * t[1]))
    optdyn.gradient(f, [0.3, 0.7], check_fd=True)
    const = optdyn.DiffFunction(lambda t: 0.0 * t.sum() + 3.0)
    np.testing.assert_array_equal(optdyn.gradient(const, theta), [0.0, 0.0, 0.0])


def test_gradient_check_flag_catches_wrong_derivative():
    # a value/derivative mismatch: the jet path sees a different function
    def f(t):
        if isinstance(t, ad.Jet):
            return (t * t).sum()
        return (t * t * t).sum()
    with pytest.raises(AssertionError):
        optdyn.gradient(optdyn.DiffFunction(f), [1.0, 2.0], check_fd=True)


def test_nonfinite():
    f = optdyn.DiffFunction(lambda t: ad.log(t).sum())
    with np.errstate(all="ignore"):
        with pytest.raises(NonFinite):
            f.value([-1.0])
        with pytest.raises(NonFinite):
            f.gradient([0.0])


def test_sumsq_is_square_of_sum():
    assert optdyn.sumsq_loss().value([1.0, 2.0]) == 9.0
    np.testing.assert_array_equal(optdyn.sumsq_loss().gradient([1.0, 2.0]), [6.0, 6.0])


def test_poly_loss():
    f = optdyn.poly_loss([1.0, 0.0, 2.0])
    assert f.value([1.0, 2.0]) == (1 + 2) + (1 + 8)


# -- contraction and Banach iteration -----------------------------------------------------

def test_contraction_examples():
    half = lambda x: 0.5 * x
    cert = optdyn.estimate_contraction(half, optdyn.box_sampler(3), seed=1)
    assert abs(cert.ratio - 0.5) <= 1e-12 and cert.contractive
    step = optdyn.gradient_step(optdyn.quad_loss(), 0.5)
    assert abs(optdyn.estimate_contraction(step, optdyn.box_sampler(2)).ratio - 0.5) <= 1e-12
    cert = optdyn.estimate_contraction(lambda x: 2 * x, optdyn.box_sampler(1))
    assert cert.ratio >= 2 - 1e-12 and not cert.contractive


def test_contraction_is_replayable_and_skips_degenerate_pairs():
    F = lambda x: np.tanh(x)
    a = optdyn.estimate_contraction(F, optdyn.box_sampler(2), n_pairs=50, seed=9)
    b = optdyn.estimate_contraction(F, optdyn.box_sampler(2), n_pairs=50, seed=9)
    assert a == b
    point = lambda g: np.zeros(2)
    c = optdyn.estimate_contraction(F, point, n_pairs=5)
    assert c.skipped == 5 and c.ratio == 0.0


def test_banach_examples():
    fp = optdyn.banach_iterate(lambda x: 0.5 * x + 1, 0.0, tol=1e-10)
    assert abs(fp.theta - 2.0) <= 1e-10 and fp.iterations <= 60
    fp = optdyn.banach_iterate(lambda x: x, [1.0, -3.0])
    np.testing.assert_array_equal(fp.theta, [1.0, -3.0])
    assert fp.iterations == 0 and fp.residual == 0.0
    with pytest.raises(NonConvergence) as exc:
        optdyn.banach_iterate(lambda x: 2 * x, 1.0, max_iter=50)
    assert len(exc.value.args) >= 1


@given(st.floats(0.05, 0.9), st.floats(-5, 5), st.integers(0, 2**32 - 1))
def test_banach_residuals_decay_at_certified_rate(q, c, seed):
    A = np.diag([q, -q / 2, q / 3])
    F = lambda x: A @ x + c
    cert = optdyn.estimate_contraction(F, optdyn.box_sampler(3, -10, 10), seed=seed)
    assert cert.ratio <= q + 1e-12
    fp = optdyn.banach_iterate(F, np.full(3, 7.0), tol=1e-10)
    r = np.array(fp.residuals)
    r = r[r > 1e-13]
    rates = r[1:] / r[:-1]
    assert np.all(rates <= cert.ratio + 0.05)
    np.testing.assert_allclose(F(fp.theta), fp.theta, atol=1e-10)


# -- flows -------------------------------------------------------------------------------

def test_flow_zero_is_identity_and_negative_time_rejected():
    flow = optdyn.FlowMap(optdyn.gradient_step(optdyn.quad_loss(), 0.1))
    np.testing.assert_array_equal(flow(0, [1.0, 2.0]), [1.0, 2.0])
    with pytest.raises(ValueError):
        flow(-1, [1.0])


def test_semigroup_examples():
    flow = optdyn.FlowMap(optdyn.gradient_step(optdyn.quad_loss(), 0.1))
    x = np.array([1.0, -2.0, 0.5])
    assert optdyn.check_semigroup(flow, [(0, 5), (2, 3)], x).passed
    np.testing.assert_array_equal(flow(5, x), flow(2, flow(3, x)))
    cases = optdyn.random_semigroup_cases(100, 16, seed=0)
    assert all(0 <= s <= 16 and 0 <= t <= 16 for s, t in cases)
    assert optdyn.check_semigroup(flow, cases, x).passed


def test_semigroup_guard_catches_stateful_step():
    calls = []

    def drifting(x):
        calls.append(1)
        return x + len(calls)

    rep = optdyn.check_semigroup(optdyn.FlowMap(drifting), [(1, 1)], np.zeros(1))
    assert not rep.passed


def test_flow_equivariance_examples():
    step = optdyn.gradient_step(optdyn.sumsq_loss(), 0.1)
    rep = optdyn.check_flow_equivariance(optdyn.FlowMap(step), SW, t_max=10)
    assert rep.passed and rep.details["max_violation"] <= 1e-9
    off = lambda x: step(x) + np.array([1.0, 0.0])
    rep = optdyn.check_flow_equivariance(optdyn.FlowMap(off), SW, t_max=3)
    assert not rep.passed and rep.violations[0].witness[0] == "s"
    assert optdyn.check_flow_equivariance(optdyn.FlowMap(off), SW, t_max=0).passed


# -- convergence ----------------------------------------------------------------------------

def geometric(base=2.0, n=20):
    return optdyn.Trajectory.from_values([base ** -t for t in range(n + 1)])


def test_convergence_examples():
    assert optdyn.detect_convergence(geometric(), 0.1) == 4
    assert optdyn.detect_convergence(optdyn.Trajectory.from_values([3.0] * 6), 0.1) == 0
    assert optdyn.detect_convergence(optdyn.Trajectory.from_values([(-1.0) ** t for t in range(10)]), 0.1) is None


def test_convergence_edge_cases():
    with pytest.raises(EmptyTrajectory):
        optdyn.detect_convergence(optdyn.Trajectory(()), 0.1)
    with pytest.raises(ValueError):
        optdyn.detect_convergence(geometric(), 0.0)
    assert optdyn.detect_convergence(optdyn.Trajectory.from_values([5.0]), 0.1) == 0
    # the last point never certifies convergence on its own
    assert optdyn.detect_convergence(optdyn.Trajectory.from_values([0.0, 1.0]), 0.1) is None
    with pytest.raises(ValueError):
        optdyn.Trajectory(((1, np.zeros(1)),))


def test_orbit_metric_sees_swapped_points_as_equal():
    pts = [[1.0, 0.0], [0.0, 1.0]] * 5
    traj = optdyn.Trajectory.from_values(pts)
    assert optdyn.detect_convergence(traj, 0.1) is None
    assert optdyn.detect_convergence(traj, 0.1, metric="orbit", rep=SW) == 0
    with pytest.raises(ValueError):
        optdyn.detect_convergence(traj, 0.1, metric="orbit")


@given(st.floats(1.1, 4.0), st.floats(1e-4, 1.0), st.floats(1e-4, 1.0))
def test_convergence_monotone_in_eps(base, e1, e2):
    e1, e2 = min(e1, e2), max(e1, e2)
    traj = geometric(base)
    t1, t2 = optdyn.detect_convergence(traj, e1), optdyn.detect_convergence(traj, e2)
    if t1 is not None and t2 is not None:
        assert t1 >= t2
    if t1 is not None:
        assert t2 is not None


# -- meta fixed points ----------------------------------------------------------------------

def test_meta_examples():
    res = optdyn.meta_fixed_point(lambda x: 0.5 * x + 0.5, SW, [0.0, 0.0])
    np.testing.assert_allclose(res.theta, [1.0, 1.0], atol=1e-12)
    assert res.invariance_defect <= 1e-12 and res.hypothesis.passed and res.invariance.passed
    res = optdyn.meta_fixed_point(lambda x: 0.5 * x, SW, [3.0, -1.0])
    assert np.max(np.abs(res.theta)) <= 1e-11 and res.invariance.passed
    res = optdyn.meta_fixed_point(lambda x: 0.5 * x + np.array([1.0, 0.0]), SW, [0.0, 0.0])
    assert not res.hypothesis.passed
    np.testing.assert_allclose(res.theta, [2.0, 0.0], atol=1e-11)
    assert not res.invariance.passed and res.invariance.violations[0].witness == ("s",)


@given(st.floats(0.05, 0.9), st.floats(-3, 3), st.integers(0, 2**32 - 1))
def test_equivariant_contraction_fixed_points_are_invariant(q, c, seed):
    a = symgrp.SetAction.from_table(symgrp.cyclic(4), [[(i + g) % 4 for i in range(4)] for g in range(4)])
    r = symgrp.permutation_representation(a)
    Phi = lambda x: q * x + c
    theta0 = np.random.default_rng(seed).normal(size=4)
    res = optdyn.meta_fixed_point(Phi, r, theta0, n_samples=5)
    assert res.hypothesis.passed
    assert res.invariance_defect <= 10 * 1e-12


def test_gradient_descent_is_a_flow_trajectory():
    traj = optdyn.gradient_descent(optdyn.quad_loss(), [1.0, 1.0], 0.5, 3)
    assert [t for t, _ in traj.points] == [0, 1, 2, 3]
    np.testing.assert_array_equal(traj.points[-1][1], [0.125, 0.125])

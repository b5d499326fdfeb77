import math

import numpy as np
import pytest

from accelerated import (AccProblem, FamilyKind, MetricFamily, acc_run, acc_step,
                         acc_step_reformulated, acc_trace_frame, check_metric_family,
                         empirical_order, rate_certificate, schedule_constant, schedule_frame,
                         schedule_init, schedule_step, tau_asymptote)
from errors import ConstraintViolated, InvalidInput, MetricNotPositive
from hilbert import DenseLinearMap, MetricOperator, cogram, operator_norm
from problems import gen_quadratic
from unified_admm import AdmmConfig, AdmmState, Trace, run


def _schedule_for(problem, lam=None):
    gamma = problem.gamma
    mu = problem.inclusion.C.lipschitz
    lam = mu + 1.0 if lam is None else lam
    tau1 = gamma / (mu + 1.0)
    norm = operator_norm(problem.L)
    return schedule_init(gamma, mu, lam, tau1, 1.0 / (tau1 * norm ** 2), norm)


def test_schedule_init_valid():
    sched = schedule_init(1.0, 0.0, 1.0, 1.0, 1.0, 1.0)
    assert sched.flags["mu_tau1_below_gamma"]
    assert sched.strong


@pytest.mark.parametrize("args,constraint", [
    ((1.0, 3.0, 4.0, 1.0, 0.1, 1.0), "tau1"),
    ((1.0, 1.0, 1.0, 1.0, 0.1, 1.0), "lambda"),
    ((1.0, 0.0, 1.0, 1.0, 2.0, 1.0), "step_product"),
    ((0.0, 0.0, 1.0, 1.0, 1.0, 1.0), "gamma"),
])
def test_schedule_init_constraints(args, constraint):
    with pytest.raises(ConstraintViolated) as err:
        schedule_init(*args)
    assert err.value.constraint.startswith(constraint)


def test_schedule_lambda_boundary():
    # lambda = mu + 1 is allowed
    schedule_init(1.0, 1.0, 2.0, 1.0, 1.0, 1.0)
    with pytest.raises(InvalidInput):
        schedule_init(1.0, 0.0, 1.0, -1.0, 1.0, 1.0)


def test_schedule_values():
    sched = schedule_init(1.0, 0.0, 1.0, 1.0, 1.0, 1.0)
    assert sched.theta_at(0) == pytest.approx(1.0 / math.sqrt(3.0), rel=1e-12)
    assert sched.tau_at(2) == pytest.approx(0.5773502692, rel=1e-9)
    assert sched.tau_at(3) == pytest.approx(0.3933198, rel=1e-6)
    assert sched.tau0 == pytest.approx(math.sqrt(3.0))
    theta, tau2, sigma1 = schedule_step(sched, 0)
    assert (theta, tau2, sigma1) == (sched.theta_at(0), sched.tau_at(2), sched.sigma_at(1))
    assert sigma1 == pytest.approx(math.sqrt(3.0))


def test_schedule_invariants():
    sched = schedule_init(1.0, 0.5, 1.5, 1.0, 0.5, 1.0)
    n = 10000
    sched.extend(n)
    product = sched.sigma_tau
    for k in range(0, n, 7):
        assert sched.tau_at(k + 1) * sched.sigma_at(k) == pytest.approx(product, rel=1e-14)
    thetas = np.array(sched.theta[:n])
    assert np.all((thetas > 0) & (thetas <= 1))
    assert np.all(np.diff(thetas) >= 0)
    taus = np.array(sched.tau[1:n])
    assert np.all(np.diff(taus) < 0)


def test_constant_schedule():
    sched = schedule_constant(0.7, 2.0)
    assert [sched.theta_at(k) for k in range(5)] == [1.0] * 5
    assert [sched.tau_at(k) for k in range(5)] == [0.7] * 5
    assert sched.sigma_at(4) == 2.0


def test_tau_asymptote_needs_long_horizon():
    with pytest.raises(InvalidInput):
        tau_asymptote(schedule_init(1.0, 0.0, 1.0, 1.0, 1.0, 1.0), 999)


@pytest.mark.slow
@pytest.mark.parametrize("lam", [1.0, 2.0])
def test_tau_asymptote_examples(lam):
    sched = schedule_init(1.0, 0.0, lam, 1.0, 1.0, 1.0)
    assert tau_asymptote(sched, 10 ** 6) == pytest.approx(lam, rel=0.02)


@pytest.mark.slow
def test_tau_asymptote_grid():
    for gamma in (0.5, 1.0, 2.0):
        for mu in (0.0, 0.5, 1.0):
            for lam in (mu + 1.0, mu + 2.0):
                for scale in (0.5, 1.0):
                    tau1 = scale * gamma / (mu + 1.0)
                    sched = schedule_init(gamma, mu, lam, tau1, 1.0 / tau1, 1.0)
                    assert tau_asymptote(sched, 10 ** 6) == pytest.approx(lam / gamma, rel=0.02)


def test_n_tau_n_increases_without_forward_term():
    frame = schedule_frame(schedule_init(1.0, 0.0, 1.0, 0.1, 10.0, 1.0), 2000)
    assert list(frame.columns) == ["k", "tau_k", "sigma_k", "theta_k", "n_tau_n"]
    values = frame["n_tau_n"].to_numpy()[1:]
    assert np.all(np.diff(values) > 0)
    assert values[-1] < 1.0


def test_choice_pd_family_holds_for_any_L(rng):
    L = DenseLinearMap(rng.standard_normal((3, 5)))
    sched = schedule_init(1.0, 0.0, 1.0, 0.5, 1.0 / (0.5 * L.norm ** 2), L.norm)
    family = MetricFamily.preset("choice_pd", sched, cogram(L))
    report = check_metric_family(family, sched, horizon=50)
    assert report.hypotheses_met
    assert report["dominates_dual_step"].witness == pytest.approx(0.0, abs=1e-9)
    np.testing.assert_allclose(family.tilde(7).matrix, np.eye(3) / sched.sigma_at(7))


def test_zero_family_with_identity_map():
    sched = schedule_init(1.0, 0.0, 1.0, 1.0, 1.0, 1.0)
    family = MetricFamily.preset(FamilyKind.ZERO, sched, cogram(DenseLinearMap.identity(2)))
    report = check_metric_family(family, sched, horizon=100)
    assert report.hypotheses_met
    assert report["LLt_lower_bound"].holds and report["step_product_tight"].holds
    assert min(report["dominates_dual_step"].per_k) >= 0.0


def test_zero_family_with_rank_deficient_map():
    L = DenseLinearMap(np.array([[1.0, 0.0], [1.0, 0.0]]))
    sched = schedule_init(1.0, 0.0, 1.0, 0.5, 1.0 / (0.5 * L.norm ** 2), L.norm)
    family = MetricFamily.preset("zero", sched, cogram(L))
    report = check_metric_family(family, sched, horizon=20)
    assert not report["dominates_dual_step"].holds
    assert not report["LLt_lower_bound"].holds
    assert not report.hypotheses_met


def test_tau_id_family():
    sched = schedule_init(1.0, 0.0, 1.0, 1.0, 1.0, 1.0)
    family = MetricFamily.preset("tau_id", sched, cogram(DenseLinearMap.identity(2)))
    report = check_metric_family(family, sched, horizon=50)
    assert report["tau_id_lower_bound"].holds
    np.testing.assert_allclose(family.at(3).matrix, sched.tau_at(3) * np.eye(2))


def test_custom_family_needs_constructor():
    sched = schedule_init(1.0, 0.0, 1.0, 1.0, 1.0, 1.0)
    with pytest.raises(InvalidInput):
        MetricFamily.preset("custom", sched, MetricOperator.identity(2))
    family = MetricFamily.custom(lambda k: np.eye(2) / sched.sigma_at(k) - sched.tau_at(k) * np.eye(2),
                                 sched, MetricOperator.identity(2))
    assert check_metric_family(family, sched, horizon=10)["dominates_dual_step"].holds


def test_acc_problem_needs_strong_monotonicity():
    problem, _ = gen_quadratic(4, 3, seed=0)
    with pytest.raises(InvalidInput):
        AccProblem.from_inclusion(problem.inclusion, 0.0)
    acc = problem.acc_problem()
    assert acc.gamma == pytest.approx(problem.gamma)
    assert acc.strong_monotonicity_slack(samples=20) >= -1e-10


def test_reformulated_step_matches(rng):
    problem, _ = gen_quadratic(5, 4, seed=7, with_h=True)
    acc = problem.acc_problem()
    sched = _schedule_for(problem)
    family = MetricFamily.preset("choice_pd", sched, acc.LLt)
    state = AdmmState.start(acc, rng.standard_normal(5), rng.standard_normal(5),
                            rng.standard_normal(4))
    ref, x_prev = state, None
    for _ in range(200):
        nxt = acc_step(acc, sched, family, state)
        ref_next = acc_step_reformulated(acc, sched, family, ref, x_prev)
        x_prev = ref.x
        assert np.linalg.norm(nxt.x - ref_next.x) <= 1e-9
        assert np.linalg.norm(nxt.y - ref_next.y) <= 1e-9
        assert np.linalg.norm(nxt.z - ref_next.z) <= 1e-9
        state, ref = nxt, ref_next


def test_solution_is_a_fixed_point():
    problem, cert = gen_quadratic(6, 4, seed=3)
    acc = problem.acc_problem()
    sched = _schedule_for(problem)
    family = MetricFamily.preset("choice_pd", sched, acc.LLt)
    x_star, v_star = cert.solution
    state = AdmmState(5, x_star, -(problem.L.matrix.T @ v_star), v_star)
    nxt = acc_step(acc, sched, family, state)
    assert np.linalg.norm(nxt.x - state.x) <= 1e-10
    assert np.linalg.norm(nxt.y - state.y) <= 1e-10
    assert np.linalg.norm(nxt.z - state.z) <= 1e-10


def test_dual_pair_matches_unified_engine(rng):
    problem, _ = gen_quadratic(5, 8, seed=1, with_h=False)
    inclusion = problem.inclusion
    c = 0.8
    dual = inclusion.dual_pair()
    sched = schedule_constant(c, 1.0, lam=1.0, L_norm=operator_norm(dual.L))
    family = MetricFamily.preset("zero", sched, dual.LLt)
    x0, z0, y0 = rng.standard_normal(5), rng.standard_normal(8), rng.standard_normal(8)
    n = 50
    unified = run(inclusion, AdmmConfig.classical(inclusion, c, max_iters=n, stop_tol=0.0),
                  x0, z0, y0, raise_on_max_iters=False)
    # the roles of x and y swap on the dual side
    accelerated = acc_run(dual, sched, family, y0, z0, x0, max_iters=n)
    for k in range(1, n + 1):
        np.testing.assert_allclose(accelerated[k].x, unified[k].y, atol=1e-9)
        np.testing.assert_allclose(accelerated[k].y, unified[k].x, atol=1e-9)
        np.testing.assert_allclose(accelerated[k].z, unified[k].z, atol=1e-9)


def test_acc_step_rejects_singular_metric():
    problem, _ = gen_quadratic(2, 2, seed=0, with_h=False)
    acc = AccProblem.from_inclusion(problem.inclusion, problem.gamma)
    sched = schedule_init(problem.gamma, 0.0, 1.0, 0.5, 1.0, 1.0)
    family = MetricFamily.custom(lambda k: -sched.tau_at(k) * acc.LLt.matrix, sched, acc.LLt)
    state = AdmmState.start(acc, np.zeros(2), np.zeros(2), np.zeros(2))
    with pytest.raises(MetricNotPositive):
        acc_step(acc, sched, family, state)


def test_acc_run_length():
    problem, _ = gen_quadratic(4, 3, seed=2)
    acc = problem.acc_problem()
    sched = _schedule_for(problem)
    family = MetricFamily.preset("choice_pd", sched, acc.LLt)
    trace = acc_run(acc, sched, family, np.zeros(4), np.zeros(4), np.zeros(3), max_iters=25)
    assert trace.iterations == 25
    assert trace.converged


def test_rate_certificate_along_run():
    problem, cert = gen_quadratic(6, 4, seed=5, with_h=False)
    acc = problem.acc_problem()
    sched = _schedule_for(problem)
    family = MetricFamily.preset("choice_pd", sched, acc.LLt)
    trace = acc_run(acc, sched, family, np.ones(6), np.zeros(6), np.zeros(4), max_iters=2000)
    rate = rate_certificate(acc, sched, family, trace, cert.solution)
    assert rate.passes()
    assert rate.envelope_holds()
    assert len(rate.lhs) == 1999
    frame = acc_trace_frame(acc, trace, cert.solution, sched, family)
    assert frame["lhs_rate"].isna().iloc[0]
    assert frame["lhs_rate"].iloc[1] == pytest.approx(rate.lhs[0])


@pytest.mark.parametrize("kind", ["choice_pd", "inv_sigma_id", "zero", "tau_id"])
def test_rate_bound_and_order_per_family(kind):
    problem, cert = gen_quadratic(6, 6)
    acc = problem.acc_problem()
    sched = _schedule_for(problem)
    family = MetricFamily.preset(kind, sched, acc.LLt)
    trace = acc_run(acc, sched, family, np.ones(6), np.zeros(6), np.zeros(6), max_iters=3000)
    rate = rate_certificate(acc, sched, family, trace, cert.solution)
    assert rate.passes()
    assert rate.envelope_holds()
    assert empirical_order(trace, cert.x_star) <= -0.9


def test_rate_certificate_from_solution():
    problem, cert = gen_quadratic(5, 3, seed=6, with_h=False)
    acc = problem.acc_problem()
    sched = _schedule_for(problem)
    family = MetricFamily.preset("choice_pd", sched, acc.LLt)
    x_star, v_star = cert.solution
    trace = acc_run(acc, sched, family, x_star, -(problem.L.matrix.T @ v_star), v_star,
                    max_iters=10)
    rate = rate_certificate(acc, sched, family, trace, cert.solution)
    assert abs(rate.rhs) <= 1e-12
    assert np.all(np.abs(rate.lhs) <= 1e-12)
    assert rate.passes()


def test_rate_certificate_needs_two_steps():
    problem, cert = gen_quadratic(3, 2, seed=0)
    acc = problem.acc_problem()
    sched = _schedule_for(problem)
    family = MetricFamily.preset("choice_pd", sched, acc.LLt)
    trace = acc_run(acc, sched, family, np.zeros(3), np.zeros(3), np.zeros(2), max_iters=1)
    with pytest.raises(InvalidInput):
        rate_certificate(acc, sched, family, trace, cert.solution)


def test_empirical_order():
    states = [AdmmState(n, np.array([1.0 / max(n, 1)]), np.zeros(1), np.zeros(1))
              for n in range(2001)]
    trace = Trace(states)
    assert empirical_order(trace, np.zeros(1), n_min=10, n_max=2000) == pytest.approx(-1.0, abs=1e-9)
    flat = Trace([AdmmState(n, np.zeros(1), np.zeros(1), np.zeros(1)) for n in range(50)])
    with pytest.raises(InvalidInput):
        empirical_order(flat, np.zeros(1))

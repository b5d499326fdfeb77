import numpy as np
import pytest

from accelerated import schedule_constant, schedule_init
from errors import ConstraintViolated, InvalidInput, MetricNotPositive
from hilbert import DenseLinearMap, MetricOperator, operator_norm
from operators import L1Norm, SquaredL2
from problems import CompositeProblem, SmoothQuadratic, gen_quadratic, quadratic_problem
from reductions import (ReductionKind, build, build_acc_chambolle_pock, build_acc_classical_admm,
                        build_bch, build_chambolle_pock, build_classical_admm,
                        build_variable_metric_admm, build_vu_condat, default_schedule,
                        default_steps, equivalence_check, make_start, run_battery,
                        schedule_from_params)


def _one_dim():
    return CompositeProblem(f=SquaredL2(1), g=SquaredL2(1), h=SmoothQuadratic.zero(1),
                            L=DenseLinearMap.identity(1), name="one_dim")


def _identity_map_problem(dim=4, seed=11):
    rng = np.random.default_rng(seed)
    R = rng.standard_normal((dim, dim))
    S = rng.standard_normal((dim, dim))
    return quadratic_problem(R.T @ R / dim + np.eye(dim), rng.standard_normal(dim),
                             S.T @ S / dim + 0.5 * np.eye(dim), rng.standard_normal(dim),
                             np.eye(dim), name="identity_map")[0]


@pytest.mark.slow
def test_battery_passes():
    frame = run_battery(n=100, tol=1e-9)
    assert len(frame) > 0
    assert set(frame["reduction"]) >= {"vu_condat", "bch", "chambolle_pock", "classical_admm",
                                       "acc_chambolle_pock"}
    failed = frame[~frame["passes"]]
    assert failed.empty, failed.to_string()


def test_vu_condat_matches_direct_scheme():
    problem, _ = gen_quadratic(8, 5, seed=0, with_h=True)
    tau = default_steps(problem, 1.0)
    spec = build_vu_condat(problem, tau, 1.0)
    assert spec.engine_name == "unified"
    start = make_start(problem, "random", seed=4)
    result = equivalence_check(spec.engine, spec.direct, problem, start, 100, tol=1e-10)
    assert result.passes, result.max_deviation
    frame = result.to_frame()
    assert list(frame.columns) == ["k", "deviation"]
    assert len(frame) == 100


def test_identical_engines_have_zero_deviation():
    problem, _ = gen_quadratic(4, 3, seed=2)
    spec = build_vu_condat(problem, default_steps(problem), 1.0)
    start = make_start(problem, "random", seed=1)
    assert equivalence_check(spec.engine, spec.engine, problem, start, 20).max_deviation == 0.0


def test_perturbed_step_is_detected():
    problem, _ = gen_quadratic(8, 5, seed=0, with_h=True)
    tau = default_steps(problem, 1.0)
    spec = build_vu_condat(problem, tau, 1.0)
    other = build_vu_condat(problem, 0.9 * tau, 1.0)
    start = make_start(problem, "random", seed=4)
    result = equivalence_check(spec.engine, other.direct, problem, start, 50)
    assert not result.passes
    assert result.max_deviation > 1e-6


def test_vu_condat_step_condition():
    problem, _ = gen_quadratic(5, 4, seed=0, with_h=True)
    tau = 2.0 / operator_norm(problem.L) ** 2
    with pytest.raises(ConstraintViolated) as err:
        build_vu_condat(problem, tau, 1.0)
    assert err.value.detail.startswith("margin")


def test_bch_boundary_is_rejected():
    with pytest.raises(ConstraintViolated):
        build_bch(_one_dim(), 1.0, 1.0)
    spec = build_bch(_one_dim(), 0.5, 1.0)
    assert spec.params["product"] == 0.5


def test_bch_needs_zero_forward_operator():
    problem, _ = gen_quadratic(4, 3, seed=0, with_h=True)
    with pytest.raises(InvalidInput):
        build_bch(problem, 0.1, 1.0)
    with pytest.raises(InvalidInput):
        build_chambolle_pock(problem, 0.1, 1.0)


def test_bad_step_values():
    problem, _ = gen_quadratic(3, 2, seed=0)
    for tau in (0.0, -1.0, float("nan"), float("inf")):
        with pytest.raises(InvalidInput):
            build_vu_condat(problem, tau, 1.0)


def test_chambolle_pock_matches_direct_scheme():
    problem, _ = gen_quadratic(6, 6, seed=2, gamma_f=0.5, with_h=False)
    spec = build_chambolle_pock(problem, default_steps(problem), 1.0)
    assert spec.kind is ReductionKind.CHAMBOLLE_POCK
    start = make_start(problem, "random", seed=0)
    assert equivalence_check(spec.engine, spec.direct, problem, start, 100).passes


def test_classical_admm_one_dimensional_step():
    spec = build_classical_admm(_one_dim(), 1.0)
    start = (np.array([7.0]), np.array([2.0]), np.array([0.0]))
    for engine in (spec.engine, spec.direct):
        xs, ys = engine(start, 1)
        np.testing.assert_allclose(xs, [[1.0]])
        np.testing.assert_allclose(ys, [[0.5]])


def test_classical_admm_rejects_singular_subproblem():
    problem = CompositeProblem(f=L1Norm(2, 1.0), g=SquaredL2(2), h=SmoothQuadratic.zero(2),
                               L=DenseLinearMap(np.array([[1.0, 0.0], [0.0, 0.0]])))
    with pytest.raises(MetricNotPositive):
        build_classical_admm(problem, 1.0)


def test_classical_admm_with_linear_operator_and_wide_map():
    # L is 3 x 5, so cL*L is singular but A = df is linear and strongly monotone
    problem, _ = gen_quadratic(5, 3, seed=6, with_h=False)
    spec = build_classical_admm(problem, 1.0)
    start = make_start(problem, "random", seed=2)
    assert equivalence_check(spec.engine, spec.direct, problem, start, 50).passes


def test_classical_admm_needs_zero_smooth_part():
    problem, _ = gen_quadratic(4, 3, seed=0, with_h=True)
    with pytest.raises(InvalidInput):
        build_classical_admm(problem, 1.0)


def test_variable_metric_admm_matches_direct_scheme():
    problem, _ = gen_quadratic(5, 4, seed=8, with_h=True)
    spec = build_variable_metric_admm(problem, 0.7, MetricOperator.identity(5, 1.0),
                                      MetricOperator.identity(4, 0.5))
    start = make_start(problem, "random", seed=3)
    result = equivalence_check(spec.engine, spec.direct, problem, start, 100)
    assert result.passes, result.max_deviation


def test_acc_chambolle_pock_matches_direct_scheme():
    problem, _ = gen_quadratic(6, 4, seed=3, with_h=True)
    spec = build_acc_chambolle_pock(problem, default_schedule(problem))
    assert spec.engine_name == "accelerated"
    start = make_start(problem, "random", seed=5, accelerated=True)
    result = equivalence_check(spec.engine, spec.direct, problem, start, 200)
    assert result.passes, result.max_deviation


def test_acc_chambolle_pock_rejects_constant_schedule():
    problem, _ = gen_quadratic(3, 2, seed=0)
    with pytest.raises(InvalidInput):
        build_acc_chambolle_pock(problem, schedule_constant(1.0, 1.0))


def test_acc_classical_admm_matches_direct_scheme():
    problem = _identity_map_problem()
    sched = default_schedule(problem)
    assert sched.lam == 1.0
    assert sched.sigma0 * sched.tau1 == pytest.approx(1.0)
    spec = build_acc_classical_admm(problem, sched, "zero")
    start = make_start(problem, "random", seed=9, accelerated=True)
    result = equivalence_check(spec.engine, spec.direct, problem, start, 100, tol=1e-7)
    assert result.passes, result.max_deviation


def test_acc_classical_admm_guards():
    problem = _identity_map_problem()
    sched = default_schedule(problem)
    with pytest.raises(InvalidInput):
        build_acc_classical_admm(problem, sched, "choice_pd")
    relaxed = schedule_init(problem.gamma, 0.0, 2.0, sched.tau1, sched.sigma0, 1.0)
    with pytest.raises(InvalidInput):
        build_acc_classical_admm(problem, relaxed, "zero")
    with_h, _ = gen_quadratic(4, 4, seed=0, with_h=True)
    with pytest.raises(InvalidInput):
        build_acc_classical_admm(with_h, default_schedule(with_h), "zero")


def test_build_dispatch():
    problem, _ = gen_quadratic(5, 4, seed=1, with_h=True)
    spec = build("vu_condat", problem, {"c": 0.5})
    assert spec.kind is ReductionKind.VU_CONDAT
    assert spec.params["tau"] == pytest.approx(default_steps(problem, 0.5))
    assert build("variable_metric_admm", problem, {"m2_scale": 0.3}).engine_name == "unified"
    acc = build("acc_chambolle_pock", problem, {})
    assert acc.engine_name == "accelerated"
    assert acc.sched.tau1 == pytest.approx(default_schedule(problem).tau1)
    with pytest.raises(ValueError):
        build("gradient_descent", problem, {})


def test_schedule_from_params_overrides():
    problem, _ = gen_quadratic(5, 4, seed=1, with_h=False)
    base = default_schedule(problem)
    sched = schedule_from_params(problem, {"tau1": 0.5 * base.tau1})
    assert sched.tau1 == 0.5 * base.tau1
    assert sched.sigma0 * sched.tau1 * operator_norm(problem.L) ** 2 == pytest.approx(1.0)
    assert sched.lam == base.lam


def test_make_start():
    problem, _ = gen_quadratic(5, 3, seed=0)
    x0, z0, y0 = make_start(problem)
    assert (x0.shape, z0.shape, y0.shape) == ((5,), (3,), (3,))
    assert not x0.any()
    a = make_start(problem, "random", seed=2)
    b = make_start(problem, "random", seed=2)
    for u, v in zip(a, b):
        np.testing.assert_array_equal(u, v)
    x0, z0, y0 = make_start(problem, "random", seed=2, accelerated=True)
    np.testing.assert_allclose(z0, -problem.L.matrix.T @ y0)
    with pytest.raises(InvalidInput):
        make_start(problem, "ones")


def test_equivalence_check_rejects_bad_start():
    problem, _ = gen_quadratic(5, 3, seed=0)
    spec = build_vu_condat(problem, default_steps(problem), 1.0)
    with pytest.raises(InvalidInput):
        equivalence_check(spec.engine, spec.direct, problem,
                          (np.zeros(4), np.zeros(3), np.zeros(3)), 5)

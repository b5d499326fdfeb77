import json

import numpy as np
import pytest

from errors import InvalidInput, SolutionInvalid
from problems import (CompositeProblem, SmoothQuadratic, SolutionCertificate, certify,
                      difference_map, elastic_net_tv_problem, gen_elastic_net_tv, gen_quadratic,
                      kkt_residual, zero_problem)
from utils import dumps


def test_gen_quadratic_certificate():
    problem, cert = gen_quadratic(6, 4, seed=3)
    assert cert.provenance == "dense-KKT-solve"
    assert max(cert.kkt_primal, cert.kkt_dual) <= 1e-10
    assert cert.x_star.shape == (6,)
    assert cert.v_star.shape == (4,)
    assert problem.name == "quadratic_6x4_s3"
    assert problem.admissible == {"unified": True, "accelerated": True, "c0": False}


def test_gen_quadratic_is_seeded():
    a, _ = gen_quadratic(5, 3, seed=1)
    b, _ = gen_quadratic(5, 3, seed=1)
    c, _ = gen_quadratic(5, 3, seed=2)
    np.testing.assert_array_equal(a.L.matrix, b.L.matrix)
    np.testing.assert_array_equal(a.f.Q, b.f.Q)
    assert not np.array_equal(a.L.matrix, c.L.matrix)


@pytest.mark.parametrize("dims", [(0, 3), (3, 0), (501, 2)])
def test_gen_quadratic_dimension_range(dims):
    with pytest.raises(InvalidInput):
        gen_quadratic(*dims)


def test_gen_quadratic_without_strong_convexity():
    problem, cert = gen_quadratic(6, 4, seed=0, gamma_f=0.0, with_h=False)
    assert not problem.admissible["accelerated"]
    with pytest.raises(InvalidInput):
        problem.acc_problem()
    with pytest.raises(InvalidInput):
        gen_quadratic(3, 2, gamma_f=-1.0)


def test_duality_gap_vanishes_at_solution():
    problem, cert = gen_quadratic(6, 4, seed=5, with_h=True)
    assert problem.duality_gap(cert.x_star, cert.v_star) == pytest.approx(0.0, abs=1e-8)
    # weak duality
    assert problem.duality_gap(np.zeros(6), np.zeros(4)) >= 0.0


def test_duality_gap_without_smooth_part():
    problem, cert = gen_quadratic(5, 5, seed=2, with_h=False)
    assert problem.duality_gap(cert.x_star, cert.v_star) == pytest.approx(0.0, abs=1e-8)


def test_zero_problem():
    problem, cert = zero_problem(3)
    assert problem.name == "zero"
    assert not cert.x_star.any()
    # every x with v = 0 solves it
    assert kkt_residual(problem, np.ones(3), np.zeros(3)) == (0.0, 0.0)


def test_certify_rejects_non_solution():
    problem, cert = gen_quadratic(4, 3, seed=0)
    with pytest.raises(SolutionInvalid) as err:
        certify(problem, cert.x_star + 0.1, cert.v_star, "perturbed", 1e-8)
    assert err.value.residuals[0] > 0


def test_problem_json_round_trip(rng):
    problem, _ = gen_quadratic(5, 3, seed=4)
    restored = CompositeProblem.from_json(json.loads(dumps(problem.to_json())))
    assert restored.name == problem.name
    assert restored.seed == 4
    x = rng.standard_normal(5)
    assert restored.primal_objective(x) == problem.primal_objective(x)


def test_problem_json_missing_key():
    payload = gen_quadratic(3, 2)[0].to_json()
    del payload["g"]
    with pytest.raises(InvalidInput):
        CompositeProblem.from_json(payload)


def test_certificate_json_round_trip():
    _, cert = gen_quadratic(4, 3, seed=1)
    restored = SolutionCertificate.from_json(json.loads(dumps(cert.to_json())))
    np.testing.assert_array_equal(restored.x_star, cert.x_star)
    np.testing.assert_array_equal(restored.v_star, cert.v_star)
    assert restored.provenance == cert.provenance


def test_least_squares_term():
    h = SmoothQuadratic.least_squares(np.eye(2), np.array([1.0, 2.0]))
    assert h.value(np.zeros(2)) == 2.5
    np.testing.assert_array_equal(h.gradient(np.zeros(2)), [-1.0, -2.0])
    assert h.lipschitz == pytest.approx(1.0)
    assert SmoothQuadratic.zero(3).is_zero


def test_difference_map():
    D = difference_map(4, 0.25)
    assert D.shape == (7, 4)
    np.testing.assert_array_equal(D[0], [-1.0, 1.0, 0.0, 0.0])
    np.testing.assert_array_equal(D[4:], 0.5 * np.eye(4))
    assert np.linalg.matrix_rank(D) == 4


def test_elastic_net_tv_problem():
    problem = elastic_net_tv_problem(10, seed=3)
    assert problem.name == "elastic_net_tv_10_s3"
    assert problem.L.matrix.shape == (19, 10)
    assert not problem.h.is_zero
    bare = elastic_net_tv_problem(10, seed=3, with_h=False)
    assert bare.name.endswith("_noh")
    assert bare.h.is_zero
    with pytest.raises(InvalidInput):
        elastic_net_tv_problem(1)


def test_elastic_net_tv_zero_target_solution():
    problem = elastic_net_tv_problem(6, seed=0, zero_target=True)
    r_p, r_d = kkt_residual(problem, np.zeros(6), np.zeros(11))
    assert r_p == 0.0
    assert r_d == 0.0


@pytest.mark.slow
def test_elastic_net_tv_long_run_certificate():
    problem, cert = gen_elastic_net_tv(8, seed=1, gamma_f=0.5, eps=1.0)
    assert cert.provenance == "long-run-solver"
    assert kkt_residual(problem, cert.x_star, cert.v_star) == (cert.kkt_primal, cert.kkt_dual)

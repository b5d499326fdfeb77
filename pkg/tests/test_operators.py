import math

import numpy as np
import pytest

from conftest import numeric_prox
from errors import DimError, InvalidInput, MetricNotPositive, NoConvergence
from hilbert import MetricOperator
from operators import (BoxIndicator, CocoerciveMap, Conjugate, ElasticNet, L1Norm,
                       MonotoneOracle, Quadratic, Scaled, SquaredL2, Translated, ZeroFunction,
                       conjugate_prox, generalized_resolvent, inverse_resolvent,
                       minimize_composite, prox, prox_from_json, resolvent)


def _catalog(rng):
    R = rng.standard_normal((4, 4))
    return [
        L1Norm(4, 0.7),
        SquaredL2(4, 2.0),
        BoxIndicator(4, -0.5, 1.5),
        Quadratic(R.T @ R, rng.standard_normal(4)),
        ElasticNet(4, 0.3, 0.8),
        Conjugate(L1Norm(4, 1.2)),
        Translated(L1Norm(4), rng.standard_normal(4)),
        Scaled(SquaredL2(4), 3.0),
    ]


def test_resolvent_examples():
    assert np.array_equal(resolvent(MonotoneOracle.zero(2), 3.0, np.array([1.0, -2.0])),
                          [1.0, -2.0])
    np.testing.assert_allclose(resolvent(MonotoneOracle.scaled_identity(1, 1.0), 1.0,
                                         np.array([2.0])), [1.0])
    l1 = MonotoneOracle.subdifferential(L1Norm(3))
    np.testing.assert_allclose(l1.resolve(1.0, np.array([3.0, -0.5, 0.0])), [2.0, 0.0, 0.0])


def test_resolvent_rejects_bad_gamma():
    A = MonotoneOracle.zero(1)
    for gamma in (0.0, -1.0, math.inf):
        with pytest.raises(InvalidInput):
            resolvent(A, gamma, np.array([1.0]))
    with pytest.raises(DimError):
        resolvent(A, 1.0, np.array([1.0, 2.0]))


def test_inverse_resolvent_examples():
    np.testing.assert_allclose(
        inverse_resolvent(MonotoneOracle.scaled_identity(1, 1.0), 1.0, np.array([2.0])), [1.0])
    np.testing.assert_allclose(
        inverse_resolvent(MonotoneOracle.scaled_identity(1, 2.0), 1.0, np.array([3.0])), [2.0])
    l1 = MonotoneOracle.subdifferential(L1Norm(1))
    np.testing.assert_allclose(inverse_resolvent(l1, 1.0, np.array([3.0])), [1.0])


def test_inverse_operator_matches_inverse_resolvent(rng):
    l1 = MonotoneOracle.subdifferential(L1Norm(5, 0.5))
    inv = l1.inverse()
    x = 3.0 * rng.standard_normal(5)
    np.testing.assert_allclose(inv.resolve(0.7, x), inverse_resolvent(l1, 0.7, x), atol=1e-14)
    T = np.array([[2.0, 1.0], [-1.0, 3.0]])
    A = MonotoneOracle.from_matrix(T)
    np.testing.assert_allclose(A.inverse().linear @ T, np.eye(2), atol=1e-12)


def test_prox_examples():
    np.testing.assert_allclose(prox(SquaredL2(1), 1.0, np.array([2.0])), [1.0])
    np.testing.assert_allclose(prox(BoxIndicator(3, 0.0, 1.0), 5.0, np.array([2.0, -1.0, 0.5])),
                               [1.0, 0.0, 0.5])
    np.testing.assert_allclose(prox(L1Norm(2), 0.5, np.array([1.0, -0.2])), [0.5, 0.0])


def test_prox_matches_numeric_minimization():
    x = np.array([1.0, -0.2, 2.5, -3.0])
    np.testing.assert_allclose(prox(L1Norm(4), 0.5, x), numeric_prox(abs, 0.5, x), atol=1e-6)
    net = ElasticNet(4, 0.3, 0.8)
    np.testing.assert_allclose(prox(net, 1.3, x),
                               numeric_prox(lambda y: 0.3 * abs(y) + 0.4 * y * y, 1.3, x),
                               atol=1e-6)


def test_conjugate_prox_examples():
    np.testing.assert_allclose(conjugate_prox(L1Norm(1), 1.0, np.array([3.0])), [1.0])
    np.testing.assert_allclose(conjugate_prox(SquaredL2(1), 1.0, np.array([2.0])), [1.0])


@pytest.mark.parametrize("gamma", [0.1, 1.0, 10.0])
def test_moreau_decomposition(gamma, rng):
    for f in _catalog(rng):
        x = rng.standard_normal(f.dim)
        total = prox(f, gamma, x) + gamma * conjugate_prox(f, 1.0 / gamma, x / gamma)
        assert np.linalg.norm(total - x) <= 1e-12 * (1.0 + np.linalg.norm(x))


@pytest.mark.parametrize("gamma", [0.1, 1.0, 10.0])
def test_resolvent_identity(gamma, rng):
    operators = [MonotoneOracle.subdifferential(f) for f in _catalog(rng)]
    operators.append(MonotoneOracle.from_matrix(np.array([[1.0, 2.0, 0.0, 0.0],
                                                          [-2.0, 1.0, 0.0, 0.0],
                                                          [0.0, 0.0, 0.5, 0.0],
                                                          [0.0, 0.0, 0.0, 0.0]])))
    for A in operators:
        x = rng.standard_normal(A.dim)
        total = resolvent(A, gamma, x) + gamma * inverse_resolvent(A, 1.0 / gamma, x / gamma)
        assert np.linalg.norm(total - x) <= 1e-12 * (1.0 + np.linalg.norm(x))


def test_conjugate_of_conjugate_prox(rng):
    f = ElasticNet(3, 0.4, 1.0)
    x = rng.standard_normal(3)
    np.testing.assert_allclose(prox(Conjugate(f), 0.6, x), conjugate_prox(f, 0.6, x), atol=1e-14)


def test_prox_json_round_trip(rng):
    for f in _catalog(rng):
        g = prox_from_json(f.to_json())
        x = rng.standard_normal(f.dim)
        assert np.array_equal(prox(g, 0.9, x), prox(f, 0.9, x))
    with pytest.raises(InvalidInput):
        prox_from_json({"kind": "nope"})


def test_generalized_resolvent_zero_operator(rng):
    R = rng.standard_normal((3, 3))
    U = MetricOperator(R.T @ R + np.eye(3))
    r = rng.standard_normal(3)
    np.testing.assert_allclose(generalized_resolvent(U, MonotoneOracle.zero(3), r),
                               np.linalg.solve(U.matrix, r), atol=1e-12)


def test_generalized_resolvent_scaled_identity(rng):
    A = MonotoneOracle.subdifferential(L1Norm(4))
    r = 3.0 * rng.standard_normal(4)
    U = MetricOperator.identity(4, 2.5)
    np.testing.assert_allclose(generalized_resolvent(U, A, r), resolvent(A, 1.0 / 2.5, r / 2.5),
                               atol=1e-15)


def test_generalized_resolvent_iterative():
    A = MonotoneOracle.subdifferential(L1Norm(2))
    U = MetricOperator(np.diag([2.0, 1.0]))
    p = generalized_resolvent(U, A, np.array([3.0, 3.0]))
    np.testing.assert_allclose(p, [1.0, 2.0], atol=1e-10)
    assert A.contains(p, np.array([3.0, 3.0]) - U.matrix @ p)


def test_generalized_resolvent_general_metric(rng):
    R = rng.standard_normal((4, 4))
    U = MetricOperator(R.T @ R + 0.5 * np.eye(4))
    A = MonotoneOracle.subdifferential(ElasticNet(4, 0.5, 0.1))
    r = 2.0 * rng.standard_normal(4)
    p = generalized_resolvent(U, A, r)
    assert A.membership_residual(p, r - U.matrix @ p) <= 1e-9


def test_generalized_resolvent_failures():
    A = MonotoneOracle.subdifferential(L1Norm(2))
    with pytest.raises(MetricNotPositive):
        generalized_resolvent(MetricOperator.zero(2), A, np.array([1.0, 1.0]))
    with pytest.raises(NoConvergence) as err:
        generalized_resolvent(MetricOperator(np.diag([1.0, 1e-3])), A, np.array([3.0, 3.0]),
                              max_iters=2)
    assert err.value.last_residual > 0
    with pytest.raises(DimError):
        generalized_resolvent(MetricOperator.identity(3), A, np.ones(2))


def test_generalized_resolvent_singular_metric_with_linear_operator():
    # U is singular but U + A is not
    A = MonotoneOracle.scaled_identity(2, 1.0)
    p = generalized_resolvent(MetricOperator(np.diag([1.0, 0.0])), A, np.array([4.0, 3.0]))
    np.testing.assert_allclose(p, [2.0, 3.0])


def test_minimize_composite():
    H = np.diag([2.0, 1.0])
    x = minimize_composite(L1Norm(2), H, np.array([3.0, 3.0]))
    np.testing.assert_allclose(x, [1.0, 2.0], atol=1e-9)
    Q = np.array([[2.0, 0.5], [0.5, 1.0]])
    x = minimize_composite(Conjugate(Quadratic(Q, np.array([1.0, -1.0]))), H, np.ones(2))
    # df*(x) = Q^{-1}(x - q)
    grad = np.linalg.solve(Q, x - np.array([1.0, -1.0]))
    np.testing.assert_allclose(grad + H @ x, np.ones(2), atol=1e-12)


def test_monotone_oracle_validation():
    with pytest.raises(InvalidInput):
        MonotoneOracle.from_matrix(np.array([[-1.0]]))
    with pytest.raises(DimError):
        MonotoneOracle.from_matrix(np.ones((2, 3)))


def test_monotone_oracle_json(rng):
    A = MonotoneOracle.subdifferential(L1Norm(3, 0.4))
    B = MonotoneOracle.from_json(A.to_json())
    x = rng.standard_normal(3)
    assert np.array_equal(A.resolve(1.5, x), B.resolve(1.5, x))
    T = MonotoneOracle.from_matrix(np.array([[1.0, 1.0], [-1.0, 1.0]]), offset=[0.5, 0.0])
    T2 = MonotoneOracle.from_json(T.to_json())
    assert np.array_equal(T2.linear, T.linear) and np.array_equal(T2.offset, T.offset)


def test_cocoercive_maps(rng):
    D = rng.standard_normal((5, 3))
    b = rng.standard_normal(5)
    C = CocoerciveMap.least_squares_gradient(D, b)
    assert C.eta == pytest.approx(1.0 / np.linalg.norm(D, 2) ** 2)
    x = rng.standard_normal(3)
    np.testing.assert_allclose(C.apply(x), D.T @ (D @ x - b))
    skew = CocoerciveMap.from_matrix(np.array([[0.0, 1.0], [-1.0, 0.0]]))
    assert not skew.is_cocoercive
    assert skew.lipschitz == pytest.approx(1.0)
    zero = CocoerciveMap.zero(2)
    assert zero.is_zero and math.isinf(zero.eta) and zero.lipschitz == 0.0


def test_zero_function_conjugate():
    f = ZeroFunction(2)
    assert f.conjugate_value(np.zeros(2)) == 0.0
    assert math.isinf(f.conjugate_value(np.array([1.0, 0.0])))

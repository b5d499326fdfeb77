"""
Monotone operator oracles.

A maximally monotone operator is handled through its resolvent
J_{gamma A} = (Id + gamma A)^{-1}. Subdifferentials of the ProxFunction catalog
have closed-form resolvents (their proximal maps); linear monotone operators
are resolved by a dense solve. The generalized resolvent (U + A)^{-1} used by
both ADMM engines is built on top of these.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Callable, ClassVar, Dict, Optional, Union

import numpy as np
from scipy import linalg

from config import INNER_MAX_ITERS, INNER_TOL
from errors import DimError, InvalidInput, MetricNotPositive, NoConvergence
from hilbert import (MetricOperator, PSD_RTOL, as_vector, float_from_json, float_to_json,
                     matrix_from_json, matrix_to_json, vector_from_json, vector_to_json)

logger = logging.getLogger(__name__)

FEASIBILITY_TOL = 1e-12


def _check_gamma(gamma: float) -> float:
    gamma = float(gamma)
    if not (gamma > 0 and math.isfinite(gamma)):
        raise InvalidInput(f"step parameter gamma must be positive and finite, got {gamma}")
    return gamma


def _check_vec(dim: int, x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1 or x.shape[0] != dim:
        raise DimError(f"expected a vector of dimension {dim}, got shape {x.shape}")
    return x


def soft_threshold(x: np.ndarray, threshold: float) -> np.ndarray:
    return np.sign(x) * np.maximum(np.abs(x) - threshold, 0.0)


# ---------------------------------------------------------------------------
# Proximable functions
# ---------------------------------------------------------------------------

_PROX_KINDS: Dict[str, type] = {}


def _register(cls):
    _PROX_KINDS[cls.kind] = cls
    return cls


class ProxFunction:
    """
    Proper convex lsc function with a closed-form proximal map.

    Subclasses implement value, _prox and conjugate_value; the public prox()
    validates its arguments and delegates to _prox.
    """

    kind: ClassVar[str] = "abstract"
    dim: int

    @property
    def strong_convexity(self) -> float:
        return 0.0

    def value(self, x: np.ndarray) -> float:
        raise NotImplementedError

    def conjugate_value(self, u: np.ndarray) -> float:
        raise NotImplementedError

    def _prox(self, gamma: float, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def prox(self, gamma: float, x: np.ndarray) -> np.ndarray:
        return prox(self, gamma, x)

    def _params_json(self) -> Dict[str, Any]:
        return {"dim": self.dim}

    def to_json(self) -> Dict[str, Any]:
        payload = {"kind": self.kind}
        payload.update(self._params_json())
        return payload

    @classmethod
    def _from_params(cls, payload: Dict[str, Any]) -> "ProxFunction":
        return cls(dim=int(payload["dim"]))


@_register
@dataclass(frozen=True, eq=False)
class ZeroFunction(ProxFunction):
    kind: ClassVar[str] = "zero"
    dim: int

    def value(self, x):
        return 0.0

    def conjugate_value(self, u):
        return 0.0 if np.max(np.abs(u)) <= FEASIBILITY_TOL else math.inf

    def _prox(self, gamma, x):
        return np.array(x, dtype=np.float64)


@_register
@dataclass(frozen=True, eq=False)
class L1Norm(ProxFunction):
    """weight * ||x||_1"""

    kind: ClassVar[str] = "l1"
    dim: int
    weight: float = 1.0

    def value(self, x):
        return self.weight * float(np.sum(np.abs(x)))

    def conjugate_value(self, u):
        return 0.0 if np.max(np.abs(u)) <= self.weight + FEASIBILITY_TOL else math.inf

    def _prox(self, gamma, x):
        return soft_threshold(x, gamma * self.weight)

    def _params_json(self):
        return {"dim": self.dim, "weight": float_to_json(self.weight)}

    @classmethod
    def _from_params(cls, payload):
        return cls(dim=int(payload["dim"]), weight=float_from_json(payload["weight"]))


@_register
@dataclass(frozen=True, eq=False)
class SquaredL2(ProxFunction):
    """(weight / 2) * ||x||^2"""

    kind: ClassVar[str] = "squared_l2"
    dim: int
    weight: float = 1.0

    @property
    def strong_convexity(self):
        return self.weight

    def value(self, x):
        return 0.5 * self.weight * float(x @ x)

    def conjugate_value(self, u):
        if self.weight == 0:
            return ZeroFunction(self.dim).conjugate_value(u)
        return float(u @ u) / (2.0 * self.weight)

    def _prox(self, gamma, x):
        return x / (1.0 + gamma * self.weight)

    def _params_json(self):
        return {"dim": self.dim, "weight": float_to_json(self.weight)}

    @classmethod
    def _from_params(cls, payload):
        return cls(dim=int(payload["dim"]), weight=float_from_json(payload["weight"]))


@_register
@dataclass(frozen=True, eq=False)
class BoxIndicator(ProxFunction):
    """Indicator of the box [lo, hi]^dim."""

    kind: ClassVar[str] = "box"
    dim: int
    lo: float = -1.0
    hi: float = 1.0

    def __post_init__(self):
        if self.lo > self.hi:
            raise InvalidInput(f"empty box [{self.lo}, {self.hi}]")

    def value(self, x):
        inside = np.all(x >= self.lo - FEASIBILITY_TOL) and np.all(x <= self.hi + FEASIBILITY_TOL)
        return 0.0 if inside else math.inf

    def conjugate_value(self, u):
        # support function of the box
        total = 0.0
        for ui in np.asarray(u, dtype=np.float64):
            if ui > 0:
                total += ui * self.hi
            elif ui < 0:
                total += ui * self.lo
        return total

    def _prox(self, gamma, x):
        return np.clip(x, self.lo, self.hi)

    def _params_json(self):
        return {"dim": self.dim, "lo": float_to_json(self.lo), "hi": float_to_json(self.hi)}

    @classmethod
    def _from_params(cls, payload):
        return cls(dim=int(payload["dim"]), lo=float_from_json(payload["lo"]),
                   hi=float_from_json(payload["hi"]))


@_register
@dataclass(frozen=True, eq=False)
class Quadratic(ProxFunction):
    """0.5 * x'Qx + q'x with Q symmetric PSD."""

    kind: ClassVar[str] = "quadratic"
    Q: np.ndarray
    q: np.ndarray

    def __post_init__(self):
        Q = MetricOperator(self.Q).matrix
        object.__setattr__(self, "Q", Q)
        object.__setattr__(self, "q", as_vector(self.q, Q.shape[0]))

    @property
    def dim(self):
        return self.Q.shape[0]

    @property
    def strong_convexity(self):
        return max(float(linalg.eigvalsh(self.Q)[0]), 0.0)

    def gradient(self, x):
        return self.Q @ x + self.q

    def value(self, x):
        return 0.5 * float(x @ (self.Q @ x)) + float(self.q @ x)

    def conjugate_value(self, u):
        w = np.asarray(u, dtype=np.float64) - self.q
        s, *_ = linalg.lstsq(self.Q, w)
        if np.linalg.norm(self.Q @ s - w) > 1e-9 * (1.0 + np.linalg.norm(w)):
            return math.inf
        return 0.5 * float(w @ s)

    def _prox(self, gamma, x):
        return linalg.solve(np.eye(self.dim) + gamma * self.Q, x - gamma * self.q,
                            assume_a="pos")

    def _params_json(self):
        return {"Q": matrix_to_json(self.Q), "q": vector_to_json(self.q)}

    @classmethod
    def _from_params(cls, payload):
        return cls(Q=matrix_from_json(payload["Q"]), q=vector_from_json(payload["q"]))


@_register
@dataclass(frozen=True, eq=False)
class ElasticNet(ProxFunction):
    """weight * ||x||_1 + (strong / 2) * ||x||^2"""

    kind: ClassVar[str] = "elastic_net"
    dim: int
    weight: float = 1.0
    strong: float = 0.0

    @property
    def strong_convexity(self):
        return self.strong

    def value(self, x):
        return self.weight * float(np.sum(np.abs(x))) + 0.5 * self.strong * float(x @ x)

    def conjugate_value(self, u):
        if self.strong == 0:
            return L1Norm(self.dim, self.weight).conjugate_value(u)
        excess = np.maximum(np.abs(u) - self.weight, 0.0)
        return float(excess @ excess) / (2.0 * self.strong)

    def _prox(self, gamma, x):
        return soft_threshold(x, gamma * self.weight) / (1.0 + gamma * self.strong)

    def _params_json(self):
        return {"dim": self.dim, "weight": float_to_json(self.weight),
                "strong": float_to_json(self.strong)}

    @classmethod
    def _from_params(cls, payload):
        return cls(dim=int(payload["dim"]), weight=float_from_json(payload["weight"]),
                   strong=float_from_json(payload["strong"]))


@_register
@dataclass(frozen=True, eq=False)
class Conjugate(ProxFunction):
    """Fenchel conjugate f* of a catalog function, proximable through Moreau."""

    kind: ClassVar[str] = "conjugate"
    inner: ProxFunction

    @property
    def dim(self):
        return self.inner.dim

    def value(self, x):
        return self.inner.conjugate_value(x)

    def conjugate_value(self, u):
        return self.inner.value(u)

    def _prox(self, gamma, x):
        return x - gamma * self.inner._prox(1.0 / gamma, x / gamma)

    def _params_json(self):
        return {"inner": self.inner.to_json()}

    @classmethod
    def _from_params(cls, payload):
        return cls(inner=prox_from_json(payload["inner"]))


@_register
@dataclass(frozen=True, eq=False)
class Translated(ProxFunction):
    """x -> inner(x - shift)"""

    kind: ClassVar[str] = "translated"
    inner: ProxFunction
    shift: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "shift", as_vector(self.shift, self.inner.dim))

    @property
    def dim(self):
        return self.inner.dim

    @property
    def strong_convexity(self):
        return self.inner.strong_convexity

    def value(self, x):
        return self.inner.value(x - self.shift)

    def conjugate_value(self, u):
        return self.inner.conjugate_value(u) + float(self.shift @ u)

    def _prox(self, gamma, x):
        return self.shift + self.inner._prox(gamma, x - self.shift)

    def _params_json(self):
        return {"inner": self.inner.to_json(), "shift": vector_to_json(self.shift)}

    @classmethod
    def _from_params(cls, payload):
        return cls(inner=prox_from_json(payload["inner"]),
                   shift=vector_from_json(payload["shift"]))


@_register
@dataclass(frozen=True, eq=False)
class Scaled(ProxFunction):
    """x -> scale * inner(x), scale > 0"""

    kind: ClassVar[str] = "scaled"
    inner: ProxFunction
    scale: float = 1.0

    def __post_init__(self):
        if not self.scale > 0:
            raise InvalidInput(f"scale must be positive, got {self.scale}")

    @property
    def dim(self):
        return self.inner.dim

    @property
    def strong_convexity(self):
        return self.scale * self.inner.strong_convexity

    def value(self, x):
        return self.scale * self.inner.value(x)

    def conjugate_value(self, u):
        return self.scale * self.inner.conjugate_value(np.asarray(u) / self.scale)

    def _prox(self, gamma, x):
        return self.inner._prox(gamma * self.scale, x)

    def _params_json(self):
        return {"inner": self.inner.to_json(), "scale": float_to_json(self.scale)}

    @classmethod
    def _from_params(cls, payload):
        return cls(inner=prox_from_json(payload["inner"]), scale=float_from_json(payload["scale"]))


def prox_from_json(payload: Dict[str, Any]) -> ProxFunction:
    """Rebuild a catalog function from its tagged JSON object."""
    try:
        cls = _PROX_KINDS[payload["kind"]]
    except (KeyError, TypeError) as e:
        raise InvalidInput(f"unknown prox function payload: {payload!r}") from e
    return cls._from_params(payload)


def prox(f: ProxFunction, gamma: float, x: np.ndarray) -> np.ndarray:
    """
    Proximal point of parameter gamma of f at x.

    Args:
        f (ProxFunction): Catalog function.
        gamma (float): Positive step.
        x (np.ndarray): Point of dimension f.dim.

    Returns:
        np.ndarray: argmin_y f(y) + ||y - x||^2 / (2 gamma).
    """
    gamma = _check_gamma(gamma)
    return f._prox(gamma, _check_vec(f.dim, x))


def conjugate_prox(f: ProxFunction, gamma: float, x: np.ndarray) -> np.ndarray:
    """prox_{gamma f*}(x) = x - gamma * prox_{f/gamma}(x/gamma)."""
    gamma = _check_gamma(gamma)
    x = _check_vec(f.dim, x)
    return x - gamma * f._prox(1.0 / gamma, x / gamma)


def minimize_composite(f: ProxFunction, H: np.ndarray, b: np.ndarray,
                       x0: Optional[np.ndarray] = None, tol: float = 1e-13,
                       max_iters: int = 200000) -> np.ndarray:
    """
    Minimize f(x) + 0.5 x'Hx - b'x for symmetric PSD H.

    f with an affine gradient takes one dense solve. Anything else runs FISTA
    with gradient restart, step 1/lambda_max(H), until successive iterates
    differ by at most tol * (1 + ||x||).
    """
    H = np.asarray(H, dtype=np.float64)
    b = _check_vec(f.dim, b)
    n = f.dim
    affine = _affine_gradient(f)
    if affine is not None:
        T, t = affine
        return linalg.solve(H + T, b - t, assume_a="sym")

    step = 1.0 / max(float(linalg.eigvalsh(H)[-1]), 1e-300)
    x = np.zeros(n) if x0 is None else np.array(x0, dtype=np.float64)
    x = f._prox(step, x)
    w, t = x.copy(), 1.0
    for it in range(max_iters):
        x_next = f._prox(step, w - step * (H @ w - b))
        if np.dot(w - x_next, x_next - x) > 0:
            # restart momentum
            t = 1.0
            x_next = f._prox(step, x - step * (H @ x - b))
        t_next = 0.5 * (1.0 + math.sqrt(1.0 + 4.0 * t * t))
        w = x_next + ((t - 1.0) / t_next) * (x_next - x)
        change = float(np.linalg.norm(x_next - x))
        x, t = x_next, t_next
        if change <= tol * (1.0 + float(np.linalg.norm(x))):
            logger.debug("minimize_composite converged in %s iterations", it + 1)
            return x
    raise NoConvergence(f"minimize_composite did not converge in {max_iters} iterations",
                        last_residual=change)


# ---------------------------------------------------------------------------
# Monotone operators
# ---------------------------------------------------------------------------

Resolvent = Callable[[float, np.ndarray], np.ndarray]


@dataclass(frozen=True, eq=False)
class MonotoneOracle:
    """
    Maximally monotone operator A given by its resolvent.

    Optional metadata: the strong monotonicity modulus, a dense matrix T and
    offset t when A is affine (A x = Tx + t with T + T' PSD), a single-valued
    forward map with its Lipschitz modulus, and the function f when A is the
    subdifferential of f.
    """

    dim: int
    resolvent_fn: Resolvent
    name: str = "custom"
    strong_monotonicity: float = 0.0
    linear: Optional[np.ndarray] = None
    offset: Optional[np.ndarray] = None
    forward: Optional[Callable[[np.ndarray], np.ndarray]] = None
    lipschitz: Optional[float] = None
    function: Optional[ProxFunction] = None

    @classmethod
    def from_matrix(cls, T: np.ndarray, offset: Optional[np.ndarray] = None,
                    name: str = "linear") -> "MonotoneOracle":
        T = np.array(T, dtype=np.float64)
        if T.ndim != 2 or T.shape[0] != T.shape[1]:
            raise DimError(f"linear operator must be square, got shape {T.shape}")
        try:
            sym = MetricOperator(0.5 * (T + T.T))
        except InvalidInput as e:
            raise InvalidInput(f"operator is not monotone: {e}") from e
        T.flags.writeable = False
        n = T.shape[0]
        t = np.zeros(n) if offset is None else np.array(as_vector(offset, n))
        t.flags.writeable = False
        eye = np.eye(n)

        def _resolvent(gamma, x):
            return linalg.solve(eye + gamma * T, x - gamma * t)

        return cls(dim=n, resolvent_fn=_resolvent, name=name,
                   strong_monotonicity=max(sym.min_eigenvalue, 0.0), linear=T, offset=t,
                   forward=lambda x: T @ x + t, lipschitz=float(linalg.svdvals(T)[0]))

    @classmethod
    def zero(cls, dim: int) -> "MonotoneOracle":
        return cls.from_matrix(np.zeros((dim, dim)), name="zero")

    @classmethod
    def scaled_identity(cls, dim: int, scale: float) -> "MonotoneOracle":
        return cls.from_matrix(scale * np.eye(dim), name=f"{scale:g}*Id")

    @classmethod
    def subdifferential(cls, f: ProxFunction) -> "MonotoneOracle":
        """A = df, resolved by prox; affine gradients keep their matrix form."""
        affine = _affine_gradient(f)
        linear, offset, forward = None, None, None
        if affine is not None:
            linear, offset = affine
            forward = lambda x: linear @ x + offset
        return cls(dim=f.dim, resolvent_fn=f._prox, name=f"subdiff({f.kind})",
                   strong_monotonicity=f.strong_convexity, linear=linear, offset=offset,
                   forward=forward, function=f)

    @property
    def is_linear(self) -> bool:
        return self.linear is not None

    def resolve(self, gamma: float, x: np.ndarray) -> np.ndarray:
        return resolvent(self, gamma, x)

    def inverse(self) -> "MonotoneOracle":
        """A^{-1}, resolved through the inverse-resolvent identity."""
        if self.function is not None:
            f = self.function
            return MonotoneOracle.subdifferential(f.inner if isinstance(f, Conjugate) else Conjugate(f))
        linear, offset = None, None
        if self.linear is not None and np.linalg.cond(self.linear) < 1e12:
            linear = np.linalg.inv(self.linear)
            offset = -linear @ self.offset
        return MonotoneOracle(dim=self.dim,
                              resolvent_fn=lambda gamma, x: inverse_resolvent(self, gamma, x),
                              name=f"inv({self.name})", linear=linear, offset=offset)

    def membership_residual(self, p: np.ndarray, u: np.ndarray) -> float:
        """||p - J_A(p + u)||, zero exactly when u is in A(p)."""
        return float(np.linalg.norm(p - self.resolvent_fn(1.0, p + u)))

    def contains(self, p: np.ndarray, u: np.ndarray, tol: float = 1e-8) -> bool:
        return self.membership_residual(p, u) <= tol * (1.0 + float(np.linalg.norm(p)))

    def to_json(self) -> Dict[str, Any]:
        if self.function is not None:
            return {"kind": "subdifferential", "function": self.function.to_json()}
        if self.linear is not None:
            return {"kind": "linear", "matrix": matrix_to_json(self.linear),
                    "offset": vector_to_json(self.offset)}
        raise InvalidInput(f"operator {self.name} has no serializable representation")

    @classmethod
    def from_json(cls, payload: Dict[str, Any]) -> "MonotoneOracle":
        kind = payload.get("kind")
        if kind == "subdifferential":
            return cls.subdifferential(prox_from_json(payload["function"]))
        if kind == "linear":
            offset = payload.get("offset")
            return cls.from_matrix(matrix_from_json(payload["matrix"]),
                                   offset=None if offset is None else vector_from_json(offset))
        raise InvalidInput(f"unknown operator payload kind {kind!r}")


def _affine_gradient(f: ProxFunction):
    """(T, t) with df(x) = Tx + t, when f is a quadratic of the catalog or its conjugate."""
    n = f.dim
    if isinstance(f, ZeroFunction):
        return np.zeros((n, n)), np.zeros(n)
    if isinstance(f, SquaredL2):
        return f.weight * np.eye(n), np.zeros(n)
    if isinstance(f, Quadratic):
        return f.Q, f.q
    if isinstance(f, Conjugate):
        inner = f.inner
        if isinstance(inner, SquaredL2) and inner.weight > 0:
            return np.eye(n) / inner.weight, np.zeros(n)
        if isinstance(inner, Quadratic) and np.linalg.cond(inner.Q) < 1e12:
            Q_inv = np.linalg.inv(inner.Q)
            return 0.5 * (Q_inv + Q_inv.T), -Q_inv @ inner.q
    return None


def resolvent(A: MonotoneOracle, gamma: float, x: np.ndarray) -> np.ndarray:
    """J_{gamma A}(x) = (Id + gamma A)^{-1} x."""
    gamma = _check_gamma(gamma)
    return A.resolvent_fn(gamma, _check_vec(A.dim, x))


def inverse_resolvent(A: MonotoneOracle, gamma: float, x: np.ndarray) -> np.ndarray:
    """J_{gamma A^{-1}}(x) = x - gamma * J_{A/gamma}(x / gamma); A^{-1} is never formed."""
    gamma = _check_gamma(gamma)
    x = _check_vec(A.dim, x)
    return x - gamma * A.resolvent_fn(1.0 / gamma, x / gamma)


def generalized_resolvent(U: MetricOperator, A: MonotoneOracle, r: np.ndarray,
                          tol: float = INNER_TOL, max_iters: int = INNER_MAX_ITERS,
                          strategy: str = "auto") -> np.ndarray:
    """
    Solve r - Up in A(p) for p, i.e. p = (U + A)^{-1} r.

    Args:
        U (MetricOperator): Metric, positive definite unless A is linear and
            U + A is invertible.
        A (MonotoneOracle): Maximally monotone operator.
        r (np.ndarray): Right-hand side.
        tol (float): Certified accuracy of the iterative path.
        max_iters (int): Budget of the iterative path.
        strategy (str): "auto", "dense", "closed_form" or "iterate".

    Returns:
        np.ndarray: The unique p.
    """
    if U.dim != A.dim:
        raise DimError(f"metric dimension {U.dim} does not match operator dimension {A.dim}")
    r = _check_vec(A.dim, r)

    if strategy == "dense" or (strategy == "auto" and A.linear is not None):
        if A.linear is None:
            raise InvalidInput(f"operator {A.name} has no linear representation")
        M = U.matrix + A.linear
        lam = float(linalg.eigvalsh(0.5 * (M + M.T))[0])
        if lam <= PSD_RTOL * (1.0 + float(np.max(np.abs(M)))):
            raise MetricNotPositive(f"U + A is not positive definite (min eigenvalue {lam:.3e})", lam)
        offset = A.offset if A.offset is not None else 0.0
        return linalg.solve(M, r - offset)

    lam_min = U.min_eigenvalue
    if lam_min <= PSD_RTOL * (1.0 + U.spectral_radius):
        raise MetricNotPositive(f"metric is not positive definite (min eigenvalue {lam_min:.3e})",
                                lam_min)

    rho = U.scaled_identity_factor
    if strategy == "closed_form" or (strategy == "auto" and rho is not None):
        if rho is None:
            raise InvalidInput("closed-form strategy needs U = rho*Id")
        return A.resolvent_fn(1.0 / rho, r / rho)

    rho = U.max_eigenvalue
    q = 1.0 - lam_min / rho
    p = A.resolvent_fn(1.0 / rho, r / rho)
    step = math.inf
    for it in range(max_iters):
        p_next = A.resolvent_fn(1.0 / rho, (r - U.matrix @ p + rho * p) / rho)
        step = float(np.linalg.norm(p_next - p))
        p = p_next
        # error <= q / (1 - q) * step for a q-contraction
        if step * q <= tol * (1.0 - q) * (1.0 + float(np.linalg.norm(p))):
            logger.debug("generalized_resolvent: %s inner iterations (contraction %.4f)", it + 1, q)
            return p
    raise NoConvergence(f"generalized resolvent did not converge in {max_iters} iterations",
                        last_residual=step)


# ---------------------------------------------------------------------------
# Single-valued forward operators
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class CocoerciveMap:
    """
    Single-valued monotone operator C.

    eta is the cocoercivity modulus (None when C is only monotone and
    Lipschitz, math.inf for the zero map); mu is the Lipschitz modulus.
    """

    dim: int
    forward: Callable[[np.ndarray], np.ndarray]
    eta: Optional[float] = None
    mu: Optional[float] = None
    linear: Optional[np.ndarray] = None
    name: str = "custom"
    is_zero: bool = False

    @classmethod
    def zero(cls, dim: int) -> "CocoerciveMap":
        return cls(dim=dim, forward=lambda x: np.zeros(dim), eta=math.inf, mu=0.0,
                   linear=np.zeros((dim, dim)), name="zero", is_zero=True)

    @classmethod
    def from_matrix(cls, T: np.ndarray, name: str = "linear") -> "CocoerciveMap":
        """Linear monotone C; cocoercive only when T is symmetric."""
        T = np.array(T, dtype=np.float64)
        MonotoneOracle.from_matrix(T)
        T.flags.writeable = False
        mu = float(linalg.svdvals(T)[0])
        eta = None
        if np.allclose(T, T.T, rtol=0.0, atol=1e-12 * (1.0 + mu)):
            eta = math.inf if mu == 0 else 1.0 / mu
        return cls(dim=T.shape[0], forward=lambda x: T @ x, eta=eta, mu=mu,
                   linear=T, name=name, is_zero=(mu == 0))

    @classmethod
    def least_squares_gradient(cls, D: np.ndarray, b: np.ndarray) -> "CocoerciveMap":
        """Gradient of 0.5 * ||Dx - b||^2, which is 1/||D||^2-cocoercive."""
        D = np.array(D, dtype=np.float64)
        b = np.array(b, dtype=np.float64)
        D.flags.writeable = False
        b.flags.writeable = False
        lip = float(linalg.svdvals(D)[0]) ** 2
        return cls(dim=D.shape[1], forward=lambda x: D.T @ (D @ x - b),
                   eta=math.inf if lip == 0 else 1.0 / lip, mu=lip,
                   linear=D.T @ D, name="least_squares_gradient")

    @property
    def is_cocoercive(self) -> bool:
        return self.eta is not None

    @property
    def lipschitz(self) -> float:
        if self.mu is not None:
            return self.mu
        return 0.0 if self.eta == math.inf else 1.0 / self.eta

    def apply(self, x: np.ndarray) -> np.ndarray:
        return self.forward(_check_vec(self.dim, x))

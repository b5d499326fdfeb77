"""
Synthetic problem generators with certified reference solutions.

A CompositeProblem is the convex program

    min_x f(x) + g(Lx) + h(x)

with f, g from the prox catalog and h a smooth quadratic (or zero). It maps to
the inclusion A = df, B = dg, C = grad h. Reference solutions come from a
dense KKT solve when every piece is quadratic and from a long run of the
unified engine otherwise; either way they are validated by kkt_residual.
"""

import logging
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Any, Dict, Optional, Tuple, Union

import numpy as np
from scipy import linalg

from accelerated import AccProblem
from errors import InvalidInput, SolutionInvalid
from hilbert import (DenseLinearMap, MetricOperator, as_vector, float_from_json, float_to_json,
                     matrix_from_json, matrix_to_json, operator_norm, vector_from_json,
                     vector_to_json)
from operators import (CocoerciveMap, ElasticNet, L1Norm, MonotoneOracle, ProxFunction,
                       Quadratic, ZeroFunction, minimize_composite, prox_from_json)
from unified_admm import AdmmConfig, InclusionProblem, MetricSchedule, run

logger = logging.getLogger(__name__)

MAX_DIM = 500
DENSE_KKT_TOL = 1e-10
LONG_RUN_KKT_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class SmoothQuadratic:
    """h(x) = 0.5 x'Hx - b'x + const with H symmetric PSD."""

    H: np.ndarray
    b: np.ndarray
    const: float = 0.0

    def __post_init__(self):
        H = MetricOperator(self.H).matrix
        object.__setattr__(self, "H", H)
        object.__setattr__(self, "b", as_vector(self.b, H.shape[0]))

    @classmethod
    def zero(cls, dim: int) -> "SmoothQuadratic":
        return cls(np.zeros((dim, dim)), np.zeros(dim))

    @classmethod
    def least_squares(cls, D: np.ndarray, target: np.ndarray) -> "SmoothQuadratic":
        """0.5 ||Dx - target||^2"""
        D = np.asarray(D, dtype=np.float64)
        target = np.asarray(target, dtype=np.float64)
        return cls(D.T @ D, D.T @ target, 0.5 * float(target @ target))

    @property
    def dim(self) -> int:
        return self.H.shape[0]

    @cached_property
    def is_zero(self) -> bool:
        return not (np.any(self.H) or np.any(self.b))

    @cached_property
    def lipschitz(self) -> float:
        return max(float(linalg.eigvalsh(self.H)[-1]), 0.0)

    @cached_property
    def strong_convexity(self) -> float:
        return max(float(linalg.eigvalsh(self.H)[0]), 0.0)

    def value(self, x: np.ndarray) -> float:
        return 0.5 * float(x @ (self.H @ x)) - float(self.b @ x) + self.const

    def gradient(self, x: np.ndarray) -> np.ndarray:
        return self.H @ x - self.b

    def as_cocoercive(self) -> CocoerciveMap:
        if self.is_zero:
            return CocoerciveMap.zero(self.dim)
        lip = self.lipschitz
        H, b = self.H, self.b
        return CocoerciveMap(dim=self.dim, forward=lambda x: H @ x - b,
                             eta=math.inf if lip == 0 else 1.0 / lip, mu=lip, linear=H,
                             name="grad h")

    def to_json(self) -> Dict[str, Any]:
        return {"H": matrix_to_json(self.H), "b": vector_to_json(self.b),
                "const": float_to_json(self.const)}

    @classmethod
    def from_json(cls, payload: Dict[str, Any]) -> "SmoothQuadratic":
        return cls(matrix_from_json(payload["H"]), vector_from_json(payload["b"]),
                   float_from_json(payload.get("const", 0.0)))


@dataclass(frozen=True, eq=False)
class CompositeProblem:
    """
    min_x f(x) + g(Lx) + h(x).

    Args:
        f (ProxFunction): Function on H.
        g (ProxFunction): Function on G.
        h (SmoothQuadratic): Smooth part, possibly zero.
        L (DenseLinearMap): Map from H to G.
        name (str): Label used in logs and exports.
        seed (int, optional): Generator seed, recorded for reproducibility.
    """

    f: ProxFunction
    g: ProxFunction
    h: SmoothQuadratic
    L: DenseLinearMap
    name: str = "composite"
    seed: Optional[int] = None

    def __post_init__(self):
        # dimension checks live in InclusionProblem
        self.inclusion

    @cached_property
    def inclusion(self) -> InclusionProblem:
        return InclusionProblem(A=MonotoneOracle.subdifferential(self.f),
                                B=MonotoneOracle.subdifferential(self.g),
                                C=self.h.as_cocoercive(), L=self.L, name=self.name)

    @property
    def gamma(self) -> float:
        """Strong convexity of f + h, the modulus the accelerated engine needs."""
        return self.f.strong_convexity + self.h.strong_convexity

    @property
    def admissible(self) -> Dict[str, bool]:
        return {"unified": True, "accelerated": self.gamma > 0, "c0": self.h.is_zero}

    def acc_problem(self) -> AccProblem:
        if not self.admissible["accelerated"]:
            raise InvalidInput(f"{self.name} is inadmissible for the accelerated engine: "
                               "f + h is not strongly convex")
        return AccProblem.from_inclusion(self.inclusion, self.gamma)

    def primal_objective(self, x: np.ndarray) -> float:
        return self.f.value(x) + self.g.value(self.L.matrix @ x) + self.h.value(x)

    def sum_conjugate(self, u: np.ndarray) -> float:
        """(f + h)*(u), which equals the infimal convolution of f* and h* here."""
        if self.h.is_zero:
            return self.f.conjugate_value(u)
        if isinstance(self.f, Quadratic):
            return Quadratic(self.f.Q + self.h.H, self.f.q - self.h.b).conjugate_value(u) - self.h.const
        # -min_x f(x) + 0.5 x'Hx - (u + b)'x, minus the constant of h
        x = minimize_composite(self.f, self.h.H, u + self.h.b)
        return float(u @ x) - self.f.value(x) - self.h.value(x)

    def dual_objective(self, v: np.ndarray) -> float:
        """-(f + h)*(-L*v) - g*(v)"""
        return -self.sum_conjugate(-self.L.matrix.T @ v) - self.g.conjugate_value(v)

    def duality_gap(self, x: np.ndarray, v: np.ndarray) -> float:
        return self.primal_objective(x) - self.dual_objective(v)

    def to_json(self) -> Dict[str, Any]:
        return {"kind": "composite", "name": self.name, "seed": self.seed,
                "f": self.f.to_json(), "g": self.g.to_json(), "h": self.h.to_json(),
                "L": self.L.to_json()}

    @classmethod
    def from_json(cls, payload: Dict[str, Any]) -> "CompositeProblem":
        try:
            return cls(f=prox_from_json(payload["f"]), g=prox_from_json(payload["g"]),
                       h=SmoothQuadratic.from_json(payload["h"]),
                       L=DenseLinearMap.from_json(payload["L"]),
                       name=payload.get("name", "composite"), seed=payload.get("seed"))
        except KeyError as e:
            raise InvalidInput(f"problem payload is missing {e}") from e


@dataclass(frozen=True, eq=False)
class SolutionCertificate:
    """Reference primal-dual pair with its KKT residuals."""

    x_star: np.ndarray
    v_star: np.ndarray
    kkt_primal: float
    kkt_dual: float
    provenance: str

    @property
    def solution(self) -> Tuple[np.ndarray, np.ndarray]:
        return self.x_star, self.v_star

    def to_json(self) -> Dict[str, Any]:
        return {"x_star": vector_to_json(self.x_star), "v_star": vector_to_json(self.v_star),
                "kkt_primal": self.kkt_primal, "kkt_dual": self.kkt_dual,
                "provenance": self.provenance}

    @classmethod
    def from_json(cls, payload: Dict[str, Any]) -> "SolutionCertificate":
        return cls(vector_from_json(payload["x_star"]), vector_from_json(payload["v_star"]),
                   float(payload.get("kkt_primal", math.nan)),
                   float(payload.get("kkt_dual", math.nan)),
                   payload.get("provenance", "file"))


AnyProblem = Union[CompositeProblem, InclusionProblem]


def kkt_residual(problem: AnyProblem, x: np.ndarray, v: np.ndarray) -> Tuple[float, float]:
    """
    Residuals of -L*v - Cx in Ax and v in B(Lx), measured through unit resolvents.

    Returns:
        Tuple[float, float]: (r_primal, r_dual).
    """
    inclusion = problem.inclusion if isinstance(problem, CompositeProblem) else problem
    return inclusion.kkt_residual(x, v)


def certify(problem: AnyProblem, x_star: np.ndarray, v_star: np.ndarray, provenance: str,
            tol: float) -> SolutionCertificate:
    """Build a certificate, raising SolutionInvalid when the pair fails the KKT test."""
    r_p, r_d = kkt_residual(problem, x_star, v_star)
    scale = 1.0 + float(np.linalg.norm(x_star)) + float(np.linalg.norm(v_star))
    if max(r_p, r_d) > tol * scale:
        raise SolutionInvalid(f"{provenance} solution fails KKT check ({r_p:.3e}, {r_d:.3e})",
                              (r_p, r_d))
    return SolutionCertificate(as_vector(x_star), as_vector(v_star), r_p, r_d, provenance)


def quadratic_problem(Q: np.ndarray, q: np.ndarray, G: np.ndarray, g_lin: np.ndarray,
                      L: np.ndarray, H: Optional[np.ndarray] = None,
                      h_lin: Optional[np.ndarray] = None, h_const: float = 0.0,
                      name: str = "quadratic", seed: Optional[int] = None
                      ) -> Tuple[CompositeProblem, SolutionCertificate]:
    """
    All-quadratic instance solved by one dense KKT solve.

    f(x) = 0.5 x'Qx + q'x, g(z) = 0.5 z'Gz + g_lin'z, h(x) = 0.5 x'Hx - h_lin'x + h_const.
    """
    L_map = DenseLinearMap(L)
    n = L_map.cols
    h = SmoothQuadratic.zero(n) if H is None else SmoothQuadratic(
        H, np.zeros(n) if h_lin is None else h_lin, h_const)
    problem = CompositeProblem(f=Quadratic(Q, q), g=Quadratic(G, g_lin), h=h, L=L_map,
                               name=name, seed=seed)
    Lm = L_map.matrix
    g = problem.g
    system = problem.f.Q + h.H + Lm.T @ g.Q @ Lm
    rhs = -problem.f.q + h.b - Lm.T @ g.q
    x_star = linalg.solve(system, rhs, assume_a="sym")
    v_star = g.Q @ (Lm @ x_star) + g.q
    cert = certify(problem, x_star, v_star, "dense-KKT-solve", DENSE_KKT_TOL)
    logger.debug("%s: dense KKT residuals %.2e, %.2e", name, cert.kkt_primal, cert.kkt_dual)
    return problem, cert


def gen_quadratic(dim_h: int, dim_g: int, seed: int = 0, gamma_f: float = 1.0,
                  with_h: bool = True) -> Tuple[CompositeProblem, SolutionCertificate]:
    """
    Seeded all-quadratic instance with f strongly convex of modulus >= gamma_f.

    gamma_f = 0 gives a rank-deficient Q, so the instance is only admissible
    for the accelerated engine if h supplies strong convexity (with_h=False
    keeps it inadmissible).
    """
    if not (1 <= dim_h <= MAX_DIM and 1 <= dim_g <= MAX_DIM):
        raise InvalidInput(f"dimensions must lie in [1, {MAX_DIM}], got {dim_h} x {dim_g}")
    if gamma_f < 0:
        raise InvalidInput(f"gamma_f must be nonnegative, got {gamma_f}")
    rng = np.random.default_rng(seed)
    if gamma_f > 0:
        R = rng.standard_normal((dim_h, dim_h))
        Q = R.T @ R / dim_h + gamma_f * np.eye(dim_h)
    else:
        rank = dim_h // 2
        R = rng.standard_normal((rank, dim_h)) if rank else np.zeros((1, dim_h))
        Q = R.T @ R / dim_h
    q = rng.standard_normal(dim_h)
    S = rng.standard_normal((dim_g, dim_g))
    G = S.T @ S / dim_g + 0.5 * np.eye(dim_g)
    g_lin = rng.standard_normal(dim_g)
    L = rng.standard_normal((dim_g, dim_h)) / math.sqrt(dim_g)
    H = h_lin = None
    if with_h:
        D = rng.standard_normal((dim_h, dim_h)) / math.sqrt(dim_h)
        target = rng.standard_normal(dim_h)
        H, h_lin = D.T @ D, D.T @ target
    name = f"quadratic_{dim_h}x{dim_g}_s{seed}"
    return quadratic_problem(Q, q, G, g_lin, L, H=H, h_lin=h_lin, name=name, seed=seed)


def difference_map(n: int, eps: float) -> np.ndarray:
    """First differences stacked on sqrt(eps) Id, an (2n-1) x n map of full column rank."""
    diff = np.zeros((n - 1, n))
    idx = np.arange(n - 1)
    diff[idx, idx] = -1.0
    diff[idx, idx + 1] = 1.0
    return np.vstack([diff, math.sqrt(eps) * np.eye(n)])


def long_run_solution(problem: CompositeProblem, max_iters: int = 10 ** 6,
                      stop_tol: float = 1e-13, c: float = 1.0) -> SolutionCertificate:
    """
    Reference solution from a long unified run with the linearizing metric
    M1 = tau^{-1} Id - cL*L, 1/tau = 1.01 (c||L||^2 + 1/(2 eta)).
    """
    inclusion = problem.inclusion
    eta = inclusion.C.eta
    inv_eta = 0.0 if eta is None or math.isinf(eta) else 1.0 / eta
    inv_tau = 1.01 * (c * operator_norm(problem.L) ** 2 + 0.5 * inv_eta)
    config = AdmmConfig(c=c, M1=MetricSchedule.condat(problem.L, c, 1.0 / inv_tau),
                        M2=MetricSchedule.zero(inclusion.dim_g), max_iters=max_iters,
                        stop_tol=stop_tol, log_every=10000)
    trace = run(inclusion, config, np.zeros(inclusion.dim_h), np.zeros(inclusion.dim_g),
                np.zeros(inclusion.dim_g), raise_on_max_iters=False)
    last = trace.last
    cert = certify(problem, last.x, last.y, "long-run-solver", LONG_RUN_KKT_TOL)
    logger.info("%s: long-run certificate after %s iterations (kkt %.2e, %.2e)",
                problem.name, trace.iterations, cert.kkt_primal, cert.kkt_dual)
    return cert


def elastic_net_tv_problem(n: int, seed: int = 0, gamma_f: float = 0.0, eps: float = 0.1,
                           weight_f: float = 0.1, weight_g: float = 0.1,
                           zero_target: bool = False, with_h: bool = True) -> CompositeProblem:
    """
    Elastic net plus total variation:

        min_x weight_f ||x||_1 + (gamma_f/2) ||x||^2 + weight_g ||Lx||_1 + 0.5 ||Dx - b||^2

    with L = difference_map(n, eps). zero_target=True sets b = 0, whose
    solution is the origin; with_h=False drops the data term.
    """
    if not 2 <= n <= 300:
        raise InvalidInput(f"n must lie in [2, 300], got {n}")
    rng = np.random.default_rng(seed)
    D = rng.standard_normal((n, n)) / math.sqrt(n)
    if zero_target:
        b = np.zeros(n)
    else:
        x_true = np.cumsum(rng.standard_normal(n) * (rng.random(n) < 0.2))
        b = D @ x_true + 0.05 * rng.standard_normal(n)
    L = DenseLinearMap(difference_map(n, eps))
    h = SmoothQuadratic.least_squares(D, b) if with_h else SmoothQuadratic.zero(n)
    suffix = "" if with_h else "_noh"
    return CompositeProblem(f=ElasticNet(n, weight_f, gamma_f), g=L1Norm(L.rows, weight_g), h=h,
                            L=L, name=f"elastic_net_tv_{n}_s{seed}{suffix}", seed=seed)


def gen_elastic_net_tv(n: int, seed: int = 0, gamma_f: float = 0.0, eps: float = 0.1,
                       weight_f: float = 0.1, weight_g: float = 0.1, zero_target: bool = False,
                       max_iters: int = 10 ** 6) -> Tuple[CompositeProblem, SolutionCertificate]:
    """elastic_net_tv_problem with a long-run reference solution."""
    problem = elastic_net_tv_problem(n, seed, gamma_f, eps, weight_f, weight_g, zero_target)
    return problem, long_run_solution(problem, max_iters=max_iters)


def zero_problem(dim: int = 1) -> Tuple[CompositeProblem, SolutionCertificate]:
    """A = B = C = 0 with L = Id; every x with v = 0 is a solution."""
    problem = CompositeProblem(f=ZeroFunction(dim), g=ZeroFunction(dim),
                               h=SmoothQuadratic.zero(dim), L=DenseLinearMap.identity(dim),
                               name="zero")
    return problem, certify(problem, np.zeros(dim), np.zeros(dim), "dense-KKT-solve",
                            DENSE_KKT_TOL)

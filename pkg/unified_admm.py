"""
Unified variable-metric ADMM engine.

Solves the primal inclusion 0 in Ax + L*B(Lx) + Cx together with its dual by
the iteration

    x+ = (cL*L + M1^k + A)^{-1}[cL*(z - y/c) + M1^k x - Cx]
    z+ = (c Id + M2^k + B)^{-1}[cLx+ + y + M2^k z]
    y+ = y + c(Lx+ - z+)

and certifies each step against the Lyapunov decrease that drives its
convergence proof. Both subproblems go through operators.generalized_resolvent.
"""

import logging
import math
import threading
import time
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np
import pandas as pd

from config import INNER_MAX_ITERS, INNER_TOL
from errors import DimError, InvalidInput, MetricNotPositive, NoConvergence, SolutionInvalid
from hilbert import (DenseLinearMap, MetricOperator, as_vector, cogram, default_tol, gram,
                     float_from_json, float_to_json, matrix_from_json, matrix_to_json)
from operators import CocoerciveMap, MonotoneOracle, generalized_resolvent, inverse_resolvent

logger = logging.getLogger(__name__)

SOLUTION_TOL = 1e-8
FEJER_TOL = 1e-9

Solution = Tuple[np.ndarray, np.ndarray]


@dataclass(frozen=True, eq=False)
class InclusionProblem:
    """
    Primal inclusion 0 in Ax + L*B(Lx) + Cx and its dual.

    Args:
        A (MonotoneOracle): Operator on H.
        B (MonotoneOracle): Operator on G.
        C (CocoerciveMap): Single-valued operator on H, possibly zero.
        L (DenseLinearMap): Map from H to G.
    """

    A: MonotoneOracle
    B: MonotoneOracle
    C: CocoerciveMap
    L: DenseLinearMap
    name: str = "inclusion"

    def __post_init__(self):
        if not (self.A.dim == self.C.dim == self.L.cols):
            raise DimError(f"A ({self.A.dim}), C ({self.C.dim}) and L ({self.L.cols} cols) "
                           "must act on the same space")
        if self.B.dim != self.L.rows:
            raise DimError(f"B acts on dimension {self.B.dim} but L has {self.L.rows} rows")

    @property
    def dim_h(self) -> int:
        return self.L.cols

    @property
    def dim_g(self) -> int:
        return self.L.rows

    @cached_property
    def LtL(self) -> MetricOperator:
        return gram(self.L)

    @cached_property
    def LLt(self) -> MetricOperator:
        return cogram(self.L)

    @cached_property
    def B_inverse(self) -> MonotoneOracle:
        return self.B.inverse()

    def kkt_residual(self, x: np.ndarray, v: np.ndarray) -> Tuple[float, float]:
        """
        Fixed-point residuals of the primal-dual optimality system.

        Returns:
            Tuple[float, float]: (||x - J_A(x - L*v - Cx)||, ||v - J_{B^-1}(v + Lx)||).
        """
        x = as_vector(x, self.dim_h)
        v = as_vector(v, self.dim_g)
        L = self.L.matrix
        r_primal = x - self.A.resolve(1.0, x - L.T @ v - self.C.forward(x))
        r_dual = v - inverse_resolvent(self.B, 1.0, v + L @ x)
        return float(np.linalg.norm(r_primal)), float(np.linalg.norm(r_dual))

    def validate_solution(self, solution: Solution, tol: float = SOLUTION_TOL) -> Solution:
        x_star, y_star = as_vector(solution[0], self.dim_h), as_vector(solution[1], self.dim_g)
        residuals = self.kkt_residual(x_star, y_star)
        scale = 1.0 + float(np.linalg.norm(x_star)) + float(np.linalg.norm(y_star))
        if max(residuals) > tol * scale:
            raise SolutionInvalid(
                f"reference pair is not a primal-dual solution (kkt {residuals[0]:.3e}, "
                f"{residuals[1]:.3e})", residuals)
        return x_star, y_star

    def dual_pair(self) -> "InclusionProblem":
        """
        The dual inclusion written as a primal one: (B^-1, A^-1, 0, -L*).

        Only defined for C = 0.
        """
        if not self.C.is_zero:
            raise InvalidInput("dual pair is only defined when C is the zero map")
        return InclusionProblem(A=self.B.inverse(), B=self.A.inverse(),
                                C=CocoerciveMap.zero(self.dim_g),
                                L=DenseLinearMap(-self.L.matrix.T), name=f"dual({self.name})")


@dataclass(frozen=True, eq=False)
class AdmmState:
    """Iterate (x^k, z^k, y^k)."""

    k: int
    x: np.ndarray
    z: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        for name in ("x", "z", "y"):
            arr = np.array(getattr(self, name), dtype=np.float64)
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)

    @classmethod
    def start(cls, problem: InclusionProblem, x0, z0, y0, z_in_h: bool = False) -> "AdmmState":
        """z lives in G for the unified engine and in H for the accelerated one."""
        z_dim = problem.dim_h if z_in_h else problem.dim_g
        return cls(0, as_vector(x0, problem.dim_h), as_vector(z0, z_dim),
                   as_vector(y0, problem.dim_g))

    def is_finite(self) -> bool:
        return bool(np.all(np.isfinite(self.x)) and np.all(np.isfinite(self.z))
                    and np.all(np.isfinite(self.y)))

    def norm(self) -> float:
        return math.sqrt(float(self.x @ self.x + self.z @ self.z + self.y @ self.y))

    def distance(self, other: "AdmmState") -> float:
        dx, dz, dy = self.x - other.x, self.z - other.z, self.y - other.y
        return math.sqrt(float(dx @ dx + dz @ dz + dy @ dy))


class MetricSchedule:
    """
    Family k -> M^k of metrics on one space.

    Generated metrics are cached per k, so eigen-decompositions are computed
    once per distinct operator.
    """

    def __init__(self, generator: Callable[[int], MetricOperator], dim: int, name: str,
                 constant: bool = False, payload: Optional[Dict[str, Any]] = None):
        self._generator = generator
        self.dim = dim
        self.name = name
        self.constant = constant
        self._payload = payload
        self._cache: Dict[int, MetricOperator] = {}
        self._lock = threading.Lock()

    def __repr__(self):
        return f"MetricSchedule({self.name}, dim={self.dim})"

    def at(self, k: int) -> MetricOperator:
        key = 0 if self.constant else int(k)
        with self._lock:
            cached = self._cache.get(key)
        if cached is not None:
            return cached
        metric = self._generator(key)
        if metric.dim != self.dim:
            raise DimError(f"metric schedule {self.name} produced dimension {metric.dim} at k={k}")
        with self._lock:
            if len(self._cache) > 4096:
                self._cache.clear()
            self._cache[key] = metric
        return metric

    @classmethod
    def constant_metric(cls, U: MetricOperator, name: str = "constant") -> "MetricSchedule":
        return cls(lambda k: U, U.dim, name, constant=True,
                   payload={"kind": "matrix", "matrix": matrix_to_json(U.matrix)})

    @classmethod
    def zero(cls, dim: int) -> "MetricSchedule":
        U = MetricOperator.zero(dim)
        return cls(lambda k: U, dim, "zero", constant=True, payload={"kind": "zero"})

    @classmethod
    def scaled_identity(cls, dim: int, scale: float) -> "MetricSchedule":
        U = MetricOperator.identity(dim, scale)
        return cls(lambda k: U, dim, f"{scale:g}*Id", constant=True,
                   payload={"kind": "scaled_identity", "scale": float_to_json(scale)})

    @classmethod
    def geometric(cls, dim: int, base: float, amplitude: float, ratio: float) -> "MetricSchedule":
        """(base + amplitude * ratio^k) * Id"""
        return cls(lambda k: MetricOperator.identity(dim, base + amplitude * ratio ** k), dim,
                   f"({base:g}+{amplitude:g}*{ratio:g}^k)*Id",
                   payload={"kind": "geometric", "base": float_to_json(base),
                            "amplitude": float_to_json(amplitude), "ratio": float_to_json(ratio)})

    @classmethod
    def condat(cls, L: DenseLinearMap, c: float, tau: float) -> "MetricSchedule":
        """tau^{-1} Id - c L*L, which linearizes the x-subproblem."""
        U = MetricOperator(np.eye(L.cols) / tau - c * gram(L).matrix)
        return cls(lambda k: U, L.cols, f"condat(tau={tau:g})", constant=True,
                   payload={"kind": "condat", "tau": float_to_json(tau)})

    def to_json(self) -> Dict[str, Any]:
        if self._payload is None:
            raise InvalidInput(f"metric schedule {self.name} is not serializable")
        return dict(self._payload)

    @classmethod
    def from_json(cls, payload: Dict[str, Any], dim: int, L: Optional[DenseLinearMap] = None,
                  c: Optional[float] = None) -> "MetricSchedule":
        kind = payload.get("kind")
        try:
            if kind == "zero":
                return cls.zero(dim)
            if kind == "scaled_identity":
                return cls.scaled_identity(dim, float_from_json(payload["scale"]))
            if kind == "geometric":
                return cls.geometric(dim, float_from_json(payload["base"]),
                                     float_from_json(payload["amplitude"]),
                                     float_from_json(payload["ratio"]))
            if kind == "condat":
                if L is None or c is None:
                    raise InvalidInput("condat metric needs L and c")
                return cls.condat(L, c, float_from_json(payload["tau"]))
            if kind == "matrix":
                return cls.constant_metric(MetricOperator(matrix_from_json(payload["matrix"])))
        except KeyError as e:
            raise InvalidInput(f"metric entry {kind!r} is missing field {e}") from e
        raise InvalidInput(f"unknown metric kind {kind!r}")


@dataclass(eq=False)
class AdmmConfig:
    """
    Engine configuration.

    Args:
        c (float): Penalty parameter, c > 0.
        M1 (MetricSchedule): Metrics on H.
        M2 (MetricSchedule): Metrics on G.
        alpha_floor (float, optional): Required lower bound for cL*L + M1^k.
        max_iters (int): Iteration budget.
        stop_tol (float): Relative successive-change threshold.
        kkt_tol (float, optional): Extra KKT residual requirement for stopping.
    """

    c: float
    M1: MetricSchedule
    M2: MetricSchedule
    alpha_floor: Optional[float] = None
    max_iters: int = 10000
    stop_tol: float = 1e-10
    kkt_tol: Optional[float] = None
    inner_tol: float = INNER_TOL
    inner_max_iters: int = INNER_MAX_ITERS
    log_every: int = 1000
    _x_cache: Dict[int, Tuple[MetricOperator, MetricOperator]] = field(default_factory=dict,
                                                                      repr=False)
    _z_cache: Dict[int, Tuple[MetricOperator, MetricOperator]] = field(default_factory=dict,
                                                                      repr=False)

    def __post_init__(self):
        if not (self.c > 0 and math.isfinite(self.c)):
            raise InvalidInput(f"penalty parameter c must be positive, got {self.c}")
        if self.max_iters < 1:
            raise InvalidInput(f"max_iters must be at least 1, got {self.max_iters}")
        if self.alpha_floor is not None and not self.alpha_floor > 0:
            raise InvalidInput(f"alpha_floor must be positive, got {self.alpha_floor}")

    @classmethod
    def classical(cls, problem: InclusionProblem, c: float, **kwargs) -> "AdmmConfig":
        return cls(c=c, M1=MetricSchedule.zero(problem.dim_h),
                   M2=MetricSchedule.zero(problem.dim_g), **kwargs)

    def x_metric(self, problem: InclusionProblem, k: int) -> MetricOperator:
        """cL*L + M1^k, checked against alpha_floor."""
        M1 = self.M1.at(k)
        hit = self._x_cache.get(id(M1))
        if hit is not None and hit[0] is M1:
            return hit[1]
        U = MetricOperator(self.c * problem.LtL.matrix + M1.matrix)
        if self.alpha_floor is not None and U.min_eigenvalue < self.alpha_floor - default_tol(U):
            raise MetricNotPositive(
                f"cL*L + M1^{k} has min eigenvalue {U.min_eigenvalue:.3e} below "
                f"alpha_floor {self.alpha_floor:.3e}", U.min_eigenvalue)
        if len(self._x_cache) > 4096:
            self._x_cache.clear()
        self._x_cache[id(M1)] = (M1, U)
        return U

    def z_metric(self, k: int) -> MetricOperator:
        """c Id + M2^k."""
        M2 = self.M2.at(k)
        hit = self._z_cache.get(id(M2))
        if hit is not None and hit[0] is M2:
            return hit[1]
        U = M2.shifted(self.c)
        if len(self._z_cache) > 4096:
            self._z_cache.clear()
        self._z_cache[id(M2)] = (M2, U)
        return U


def admm_step(problem: InclusionProblem, config: AdmmConfig, state: AdmmState) -> AdmmState:
    """One iteration (x^k, z^k, y^k) -> (x^{k+1}, z^{k+1}, y^{k+1})."""
    k, c = state.k, config.c
    L = problem.L.matrix
    M1 = config.M1.at(k)
    M2 = config.M2.at(k)

    rhs_x = c * (L.T @ (state.z - state.y / c)) + M1.matrix @ state.x - problem.C.forward(state.x)
    x_next = generalized_resolvent(config.x_metric(problem, k), problem.A, rhs_x,
                                   tol=config.inner_tol, max_iters=config.inner_max_iters)

    Lx = L @ x_next
    rhs_z = c * Lx + state.y + M2.matrix @ state.z
    z_next = generalized_resolvent(config.z_metric(k), problem.B, rhs_z,
                                   tol=config.inner_tol, max_iters=config.inner_max_iters)

    y_next = state.y + c * (Lx - z_next)
    return AdmmState(k + 1, x_next, z_next, y_next)


@dataclass
class Trace:
    """Iterate history of one run; states[0] is the start."""

    states: List[AdmmState]
    wall_ns: List[int] = field(default_factory=list)
    converged: bool = False

    def __len__(self):
        return len(self.states)

    def __getitem__(self, i):
        return self.states[i]

    @property
    def last(self) -> AdmmState:
        return self.states[-1]

    @property
    def iterations(self) -> int:
        return len(self.states) - 1

    def append(self, state: AdmmState, elapsed_ns: int) -> None:
        self.states.append(state)
        self.wall_ns.append(elapsed_ns)


Monitor = Callable[[AdmmState], None]


def run(problem: InclusionProblem, config: AdmmConfig, x0, z0, y0,
        monitor: Optional[Monitor] = None, raise_on_max_iters: bool = True) -> Trace:
    """
    Iterate admm_step until the relative successive change drops below stop_tol.

    Args:
        problem (InclusionProblem): Problem to solve.
        config (AdmmConfig): Engine configuration.
        x0, z0, y0: Start point.
        monitor (callable, optional): Called with every new state.
        raise_on_max_iters (bool): Raise NoConvergence when the budget runs out.

    Returns:
        Trace: Full iterate history.
    """
    state = AdmmState.start(problem, x0, z0, y0)
    trace = Trace([state], wall_ns=[0])
    logger.info("unified ADMM on %s: c=%s, M1=%s, M2=%s, max_iters=%s", problem.name, config.c,
                config.M1.name, config.M2.name, config.max_iters)
    t0 = time.perf_counter_ns()
    change = math.inf
    for it in range(config.max_iters):
        nxt = admm_step(problem, config, state)
        if not nxt.is_finite():
            raise NoConvergence(f"iterates diverged at k={nxt.k}", last_residual=math.inf,
                                trace=trace)
        change = nxt.distance(state)
        scale = 1.0 + state.norm()
        trace.append(nxt, time.perf_counter_ns() - t0)
        if monitor is not None:
            monitor(nxt)
        state = nxt
        if config.log_every and nxt.k % config.log_every == 0:
            logger.debug("k=%s relative change %.3e", nxt.k, change / scale)
        if change <= config.stop_tol * scale:
            if config.kkt_tol is None or max(problem.kkt_residual(nxt.x, nxt.y)) <= config.kkt_tol:
                trace.converged = True
                logger.info("converged after %s iterations (change %.3e)", nxt.k, change)
                return trace

    logger.warning("stopped at max_iters=%s with change %.3e", config.max_iters, change)
    if raise_on_max_iters:
        raise NoConvergence(f"no convergence within {config.max_iters} iterations",
                            last_residual=change, trace=trace)
    return trace


def lyapunov(problem: InclusionProblem, config: AdmmConfig, state: AdmmState,
             solution: Solution) -> float:
    """1/2||x-x*||^2_{M1^k} + 1/2||z-Lx*||^2_{M2^k+c Id} + (2c)^{-1}||y-y*||^2 at k = state.k."""
    x_star, y_star = solution
    dx = state.x - x_star
    dz = state.z - problem.L.matrix @ x_star
    dy = state.y - y_star
    return (0.5 * config.M1.at(state.k).seminorm_sq(dx)
            + 0.5 * config.z_metric(state.k).seminorm_sq(dz)
            + float(dy @ dy) / (2.0 * config.c))


# ---------------------------------------------------------------------------
# Hypothesis checks
# ---------------------------------------------------------------------------

@dataclass
class Verdict:
    """Outcome of one hypothesis, witnessed by the smallest eigenvalue seen."""

    name: str
    holds: bool
    witness: float
    worst_k: Optional[int] = None
    per_k: List[float] = field(default_factory=list)
    detail: str = ""

    def to_json(self) -> Dict[str, Any]:
        return {"name": self.name, "holds": self.holds, "witness": self.witness,
                "worst_k": self.worst_k, "detail": self.detail}


@dataclass
class HypothesisReport:
    theorem: str
    horizon: int
    verdicts: Dict[str, Verdict]
    required: List[str]
    alternatives: List[str]

    @property
    def hypotheses_met(self) -> bool:
        if not all(self.verdicts[n].holds for n in self.required):
            return False
        return not self.alternatives or any(self.verdicts[n].holds for n in self.alternatives)

    def __getitem__(self, name: str) -> Verdict:
        return self.verdicts[name]

    def to_json(self) -> Dict[str, Any]:
        return {"theorem": self.theorem, "horizon": self.horizon,
                "hypotheses_met": self.hypotheses_met,
                "verdicts": {n: v.to_json() for n, v in self.verdicts.items()}}


def make_verdict(name: str, per_k: List[float], threshold: float, detail: str = "",
                 strict: bool = False) -> Verdict:
    """Holds when every per-k witness is >= threshold (> for strict)."""
    worst = int(np.argmin(per_k))
    witness = float(per_k[worst])
    holds = witness > threshold if strict else witness >= threshold
    return Verdict(name, bool(holds), witness, worst, list(per_k), detail)


def _common_checks(problem: InclusionProblem, config: AdmmConfig, horizon: int,
                   tol: float) -> Dict[str, Verdict]:
    M1 = [config.M1.at(k) for k in range(horizon + 2)]
    M2 = [config.M2.at(k) for k in range(horizon + 2)]
    m1_drop = [(M1[k] - M1[k + 1]).min_eigenvalue for k in range(horizon + 1)]
    m2_drop = [(M2[k] - M2[k + 1]).min_eigenvalue for k in range(horizon + 1)]
    verdicts = {
        "M1_nonincreasing": make_verdict("M1_nonincreasing", m1_drop, -tol,
                                         "min eig(M1^k - M1^{k+1})"),
        "M2_nonincreasing": make_verdict("M2_nonincreasing", m2_drop, -tol,
                                         "min eig(M2^k - M2^{k+1})"),
    }
    lam_LtL = problem.LtL.min_eigenvalue
    lam_M2 = min(M2[k].min_eigenvalue for k in range(horizon + 1))
    verdicts["II"] = Verdict("II", lam_LtL > tol and lam_M2 > tol, min(lam_LtL, lam_M2),
                             detail=f"min eig(L*L) = {lam_LtL:.3e}, min eig(M2^k) = {lam_M2:.3e}")
    return verdicts


def check_hypotheses_thm_cocoercive(problem: InclusionProblem, config: AdmmConfig,
                                    horizon: int = 100, tol: Optional[float] = None
                                    ) -> HypothesisReport:
    """
    Hypotheses for convergence with an eta-cocoercive C.

    (I): M1^k - (2 eta)^{-1} Id in P_alpha1; (II): L*L in P_alpha and M2^k in P_alpha2;
    always required: M1^k and M2^k nonincreasing and M1^k - (2 eta)^{-1} Id PSD.
    """
    eta = problem.C.eta
    if eta is None:
        raise InvalidInput("C is not cocoercive")
    shift = 0.0 if math.isinf(eta) else 1.0 / (2.0 * eta)
    if tol is None:
        tol = default_tol(*(config.M1.at(k) for k in range(horizon + 1)))
    verdicts = _common_checks(problem, config, horizon, tol)
    shifted = [config.M1.at(k).min_eigenvalue - shift for k in range(horizon + 1)]
    verdicts["I"] = make_verdict("I", shifted, tol, "min eig(M1^k - Id/(2 eta))", strict=True)
    verdicts["M1_shift_psd"] = make_verdict("M1_shift_psd", shifted, -tol,
                                            "M1^k - Id/(2 eta) in S_+")
    report = HypothesisReport("cocoercive", horizon, verdicts,
                              required=["M1_nonincreasing", "M2_nonincreasing", "M1_shift_psd"],
                              alternatives=["I", "II"])
    _log_report(report)
    return report


def check_hypotheses_thm_C0(problem: InclusionProblem, config: AdmmConfig,
                            horizon: int = 100, tol: Optional[float] = None) -> HypothesisReport:
    """
    Hypotheses for convergence with C = 0.

    (I): M1^k in P_alpha1; (II): L*L in P_alpha and M2^k in P_alpha2;
    (III): L*L in P_alpha and 2 M2^{k+1} >= M2^k >= M2^{k+1}.
    """
    if tol is None:
        tol = default_tol(*(config.M1.at(k) for k in range(horizon + 1)))
    verdicts = _common_checks(problem, config, horizon, tol)
    m1_min = [config.M1.at(k).min_eigenvalue for k in range(horizon + 1)]
    verdicts["I"] = make_verdict("I", m1_min, tol, "min eig(M1^k)", strict=True)
    M2 = [config.M2.at(k) for k in range(horizon + 2)]
    doubling = [(M2[k + 1].scaled(2.0) - M2[k]).min_eigenvalue for k in range(horizon + 1)]
    lam_LtL = problem.LtL.min_eigenvalue
    sandwich = min(min(doubling), verdicts["M2_nonincreasing"].witness)
    iii = Verdict("III", lam_LtL > tol and sandwich >= -tol, min(lam_LtL, sandwich),
                  worst_k=int(np.argmin(doubling)), per_k=doubling,
                  detail=f"min eig(L*L) = {lam_LtL:.3e}, min eig(2M2^(k+1) - M2^k) = "
                         f"{min(doubling):.3e}")
    verdicts["III"] = iii
    report = HypothesisReport("C0", horizon, verdicts,
                              required=["M1_nonincreasing", "M2_nonincreasing"],
                              alternatives=["I", "II", "III"])
    _log_report(report)
    return report


def _log_report(report: HypothesisReport) -> None:
    if report.hypotheses_met:
        logger.info("%s hypotheses hold up to k=%s", report.theorem, report.horizon)
        return
    failed = [n for n, v in report.verdicts.items() if not v.holds]
    logger.warning("%s hypotheses unmet up to k=%s: %s", report.theorem, report.horizon,
                   ", ".join(failed))


# ---------------------------------------------------------------------------
# Fejer certificates
# ---------------------------------------------------------------------------

@dataclass
class FejerCertificate:
    """lhs <= rhs is the Lyapunov decrease for step k -> k+1."""

    k: int
    lhs: float
    rhs: float
    terms: Dict[str, float]
    mode: str

    @property
    def slack(self) -> float:
        return self.rhs - self.lhs

    def passes(self, tol: float = FEJER_TOL) -> bool:
        return self.slack >= -tol * (1.0 + abs(self.rhs))


def _auto_mode(problem: InclusionProblem, state_prev: Optional[AdmmState]) -> str:
    if not problem.C.is_zero:
        return "cocoercive"
    return "c0_iii" if state_prev is not None else "c0"


def fejer_certificate(problem: InclusionProblem, config: AdmmConfig, state_k: AdmmState,
                      state_k1: AdmmState, solution: Solution, mode: Optional[str] = None,
                      state_prev: Optional[AdmmState] = None,
                      check_solution: bool = True) -> FejerCertificate:
    """
    Evaluate both sides of the Lyapunov decrease for one step.

    Args:
        problem (InclusionProblem): Problem of the run.
        config (AdmmConfig): Configuration of the run.
        state_k, state_k1 (AdmmState): Consecutive iterates.
        solution (Solution): Reference primal-dual pair (x*, y*).
        mode (str, optional): "cocoercive", "c0" or "c0_iii"; chosen from the problem
            when omitted ("c0_iii" whenever state_prev is given and C = 0).
        state_prev (AdmmState, optional): Iterate k-1, needed by "c0_iii".
        check_solution (bool): Validate the reference pair first.

    Returns:
        FejerCertificate: Sides of the inequality and the residual terms.
    """
    if check_solution:
        solution = problem.validate_solution(solution)
    mode = mode or _auto_mode(problem, state_prev)
    k, c = state_k.k, config.c
    L = problem.L.matrix
    M1 = config.M1.at(k)
    M2 = config.M2.at(k)
    dx = state_k.x - state_k1.x
    dz = state_k.z - state_k1.z

    lhs = lyapunov(problem, config, state_k1, solution)
    v_k = lyapunov(problem, config, state_k, solution)
    terms: Dict[str, float] = {}

    if mode == "cocoercive":
        eta = problem.C.eta
        if eta is None:
            raise InvalidInput("cocoercive certificate needs an eta-cocoercive C")
        x_star = solution[0]
        gap = state_k.z - L @ state_k1.x
        terms["z_gap"] = 0.5 * c * float(gap @ gap)
        if math.isinf(eta):
            terms["x_step"] = 0.5 * M1.seminorm_sq(dx)
            terms["forward"] = 0.0
        else:
            terms["x_step"] = 0.5 * (M1.seminorm_sq(dx) - float(dx @ dx) / (2.0 * eta))
            w = eta * (problem.C.forward(x_star) - problem.C.forward(state_k.x)) + 0.5 * dx
            terms["forward"] = float(w @ w) / eta
        terms["z_step"] = 0.5 * M2.seminorm_sq(dz)
        rhs = v_k - sum(terms.values())
    elif mode == "c0":
        gap = state_k.z - L @ state_k1.x
        terms["z_gap"] = 0.5 * c * float(gap @ gap)
        terms["x_step"] = 0.5 * M1.seminorm_sq(dx)
        terms["z_step"] = 0.5 * M2.seminorm_sq(dz)
        rhs = v_k - sum(terms.values())
    elif mode == "c0_iii":
        if state_prev is None or state_prev.k != k - 1:
            raise InvalidInput("c0_iii certificate needs the iterate k-1")
        dz_prev = state_k.z - state_prev.z
        dy = state_k1.y - state_k.y
        lhs += 0.5 * M2.seminorm_sq(dz)
        carry = 0.5 * config.M2.at(k - 1).seminorm_sq(dz_prev)
        terms["x_step"] = 0.5 * M1.seminorm_sq(dx)
        terms["z_step"] = 0.5 * c * float(dz @ dz)
        terms["y_step"] = float(dy @ dy) / (2.0 * c)
        rhs = v_k + carry - sum(terms.values())
    else:
        raise InvalidInput(f"unknown certificate mode {mode!r}")

    return FejerCertificate(k=k, lhs=lhs, rhs=rhs, terms=terms, mode=mode)


def certify_trace(problem: InclusionProblem, config: AdmmConfig, trace: Trace,
                  solution: Solution, mode: Optional[str] = None) -> List[FejerCertificate]:
    """Certificates for every step of a trace; "c0_iii" falls back to "c0" at k = 0."""
    solution = problem.validate_solution(solution)
    certs = []
    for i in range(len(trace) - 1):
        prev = trace[i - 1] if i >= 1 else None
        step_mode = mode
        if mode == "c0_iii" and prev is None:
            step_mode = "c0"
        elif mode is None and problem.C.is_zero:
            step_mode = "c0"
        certs.append(fejer_certificate(problem, config, trace[i], trace[i + 1], solution,
                                       mode=step_mode, state_prev=prev if step_mode == "c0_iii" else None,
                                       check_solution=False))
    failing = [cert.k for cert in certs if not cert.passes()]
    if failing:
        logger.warning("Fejer inequality violated at %s steps (first k=%s)", len(failing), failing[0])
    return certs


@dataclass
class SummabilityReport:
    """Partial sums and tail maxima of the residual series of a run."""

    partial_sums: Dict[str, float]
    tail_max: Dict[str, float]
    terms: Dict[str, np.ndarray]

    def to_json(self) -> Dict[str, Any]:
        return {"partial_sums": self.partial_sums, "tail_max": self.tail_max}


def summability_report(problem: InclusionProblem, config: AdmmConfig,
                       trace: Trace) -> SummabilityReport:
    """
    Series ||z^k - Lx^{k+1}||^2, ||x^k - x^{k+1}||^2_{M1^k - Id/(2 eta)} and
    ||z^k - z^{k+1}||^2_{M2^k}; tail maxima are taken over the last tenth.
    """
    eta = problem.C.eta
    shift = 0.0 if (eta is None or math.isinf(eta)) else 1.0 / (2.0 * eta)
    L = problem.L.matrix
    gap, xs, zs = [], [], []
    for i in range(len(trace) - 1):
        s, s1 = trace[i], trace[i + 1]
        g = s.z - L @ s1.x
        dx = s.x - s1.x
        dz = s.z - s1.z
        gap.append(float(g @ g))
        xs.append(config.M1.at(s.k).seminorm_sq(dx) - shift * float(dx @ dx))
        zs.append(config.M2.at(s.k).seminorm_sq(dz))
    terms = {"z_gap": np.array(gap), "x_step": np.array(xs), "z_step": np.array(zs)}
    tail = max(1, len(gap) // 10)
    return SummabilityReport(
        partial_sums={n: float(np.sum(t)) for n, t in terms.items()},
        tail_max={n: float(np.max(t[-tail:])) if t.size else 0.0 for n, t in terms.items()},
        terms=terms,
    )


def step_inclusion_residuals(problem: InclusionProblem, config: AdmmConfig, state_k: AdmmState,
                             state_k1: AdmmState) -> Tuple[float, float]:
    """
    Membership residuals of the two inclusions one step satisfies:

        cL*(z^k - Lx^{k+1} - y^k/c) + M1^k(x^k - x^{k+1}) - Cx^k in A x^{k+1}
        y^{k+1} + M2^k(z^k - z^{k+1}) in B z^{k+1}
    """
    c = config.c
    L = problem.L.matrix
    M1 = config.M1.at(state_k.k).matrix
    M2 = config.M2.at(state_k.k).matrix
    a = (c * (L.T @ (state_k.z - L @ state_k1.x - state_k.y / c))
         + M1 @ (state_k.x - state_k1.x) - problem.C.forward(state_k.x))
    b = state_k1.y + M2 @ (state_k.z - state_k1.z)
    return (problem.A.membership_residual(state_k1.x, a),
            problem.B.membership_residual(state_k1.z, b))


def trace_frame(problem: InclusionProblem, config: AdmmConfig, trace: Trace,
                solution: Optional[Solution] = None, mode: Optional[str] = None) -> pd.DataFrame:
    """
    One row per performed iteration with the trace CSV columns.

    Distances, Lyapunov values and Fejer slack are NaN when no reference
    solution is given.
    """
    rows = []
    certs: List[Optional[FejerCertificate]] = [None] * (len(trace) - 1)
    if solution is not None:
        solution = problem.validate_solution(solution)
        certs = certify_trace(problem, config, trace, solution, mode=mode)
    for i in range(1, len(trace)):
        s = trace[i]
        kkt_p, kkt_d = problem.kkt_residual(s.x, s.y)
        row = {"k": s.k, "dist_x": math.nan, "dist_z": math.nan, "dist_y": math.nan,
               "lyapunov": math.nan, "fejer_slack": math.nan,
               "kkt_primal": kkt_p, "kkt_dual": kkt_d, "wall_ns": trace.wall_ns[i]}
        if solution is not None:
            x_star, y_star = solution
            row["dist_x"] = float(np.linalg.norm(s.x - x_star))
            row["dist_z"] = float(np.linalg.norm(s.z - problem.L.matrix @ x_star))
            row["dist_y"] = float(np.linalg.norm(s.y - y_star))
            row["lyapunov"] = lyapunov(problem, config, s, solution)
            row["fejer_slack"] = certs[i - 1].slack
        rows.append(row)
    return pd.DataFrame(rows, columns=TRACE_COLUMNS)


TRACE_COLUMNS = ["k", "dist_x", "dist_z", "dist_y", "lyapunov", "fejer_slack",
                 "kkt_primal", "kkt_dual", "wall_ns"]

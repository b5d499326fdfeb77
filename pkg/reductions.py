"""
Named algorithms as configurations of the two engines.

Each builder returns a ReductionSpec holding the engine configuration and an
independent direct implementation of the named scheme. Both are wrapped as
Engine callables producing aligned (x^k, y^k) trajectories for k = 1..n, so
equivalence_check can compare them iterate by iterate.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from accelerated import (AccProblem, FamilyKind, MetricFamily, ParamSchedule, acc_run,
                         check_metric_family, schedule_init)
from errors import ConstraintViolated, InvalidInput, MetricNotPositive
from hilbert import MetricOperator, default_tol, operator_norm
from operators import Conjugate, conjugate_prox, inverse_resolvent, minimize_composite
from problems import CompositeProblem, elastic_net_tv_problem, gen_quadratic
from unified_admm import AdmmConfig, InclusionProblem, MetricSchedule, run

logger = logging.getLogger(__name__)

Start = Tuple[np.ndarray, np.ndarray, np.ndarray]
Trajectory = Tuple[np.ndarray, np.ndarray]
Engine = Callable[[Start, int], Trajectory]
AnyProblem = Union[CompositeProblem, InclusionProblem]

VU_CONDAT_CONDITION = "1/τ − c‖L‖² > 1/(2η)"
BCH_CONDITION = "cτ‖L‖² < 1"


class ReductionKind(str, Enum):
    VU_CONDAT = "vu_condat"
    BCH = "bch"
    CHAMBOLLE_POCK = "chambolle_pock"
    CLASSICAL_ADMM = "classical_admm"
    VARIABLE_METRIC_ADMM = "variable_metric_admm"
    ACC_CHAMBOLLE_POCK = "acc_chambolle_pock"
    ACC_CLASSICAL_ADMM = "acc_classical_admm"


@dataclass
class ReductionSpec:
    """
    A named scheme: engine configuration plus its direct implementation.

    Exactly one of config (unified engine) or sched/family (accelerated
    engine) is set.
    """

    kind: ReductionKind
    problem: AnyProblem
    params: Dict[str, Any]
    engine: Engine
    direct: Engine
    config: Optional[AdmmConfig] = None
    sched: Optional[ParamSchedule] = None
    family: Optional[MetricFamily] = None

    @property
    def engine_name(self) -> str:
        return "unified" if self.config is not None else "accelerated"


def _split(problem: AnyProblem) -> Tuple[Optional[CompositeProblem], InclusionProblem]:
    if isinstance(problem, CompositeProblem):
        return problem, problem.inclusion
    return None, problem


def _require_composite(problem: AnyProblem, kind: ReductionKind) -> CompositeProblem:
    if not isinstance(problem, CompositeProblem):
        raise InvalidInput(f"{kind.value} is a variational scheme and needs a CompositeProblem")
    return problem


def _stack(xs: List[np.ndarray], ys: List[np.ndarray]) -> Trajectory:
    return np.array(xs), np.array(ys)


def unified_engine(inclusion: InclusionProblem, config: AdmmConfig) -> Engine:
    def _engine(start: Start, n: int) -> Trajectory:
        x0, z0, y0 = start
        local = AdmmConfig(c=config.c, M1=config.M1, M2=config.M2, alpha_floor=config.alpha_floor,
                           max_iters=n, stop_tol=0.0, inner_tol=config.inner_tol,
                           inner_max_iters=config.inner_max_iters, log_every=0)
        trace = run(inclusion, local, x0, z0, y0, raise_on_max_iters=False)
        states = trace.states[1:]
        # an exact fixed point stops the run early
        states += [trace.last] * (n - len(states))
        return _stack([s.x for s in states], [s.y for s in states])
    return _engine


def accelerated_engine(inclusion: InclusionProblem, sched: ParamSchedule,
                       family: MetricFamily) -> Engine:
    def _engine(start: Start, n: int) -> Trajectory:
        x0, z0, y0 = start
        trace = acc_run(inclusion, sched, family, x0, z0, y0, max_iters=n, log_every=0)
        states = trace.states[1:]
        return _stack([s.x for s in states], [s.y for s in states])
    return _engine


def _check_positive(name: str, value: float) -> float:
    if not (value > 0 and math.isfinite(value)):
        raise InvalidInput(f"{name} must be positive and finite, got {value}")
    return float(value)


# ---------------------------------------------------------------------------
# Primal-dual schemes on the unified engine
# ---------------------------------------------------------------------------

def _forward_backward_direct(problem: AnyProblem, tau: float, c: float) -> Engine:
    """
    y^{k+1} = J_{cB^{-1}}(y^k + cLx^{k+1}),
    x^{k+2} = J_{tau A}(x^{k+1} - tau Cx^{k+1} - tau L*(2y^{k+1} - y^k)).

    Run from the engine's start through the virtual dual iterate
    y^{-1} = y^0 + c(z^0 - Lx^0); prox forms are used for composite problems.
    """
    composite, inclusion = _split(problem)
    L = inclusion.L.matrix
    if composite is not None:
        res_a = lambda v: composite.f.prox(tau, v)
        res_b_inv = lambda v: conjugate_prox(composite.g, c, v)
        forward = composite.h.gradient
    else:
        res_a = lambda v: inclusion.A.resolve(tau, v)
        res_b_inv = lambda v: inverse_resolvent(inclusion.B, c, v)
        forward = inclusion.C.forward

    def _direct(start: Start, n: int) -> Trajectory:
        x, z0, y = (np.array(v, dtype=np.float64) for v in start)
        y_prev = y + c * (z0 - L @ x)
        xs, ys = [], []
        for _ in range(n):
            x = res_a(x - tau * forward(x) - tau * (L.T @ (2.0 * y - y_prev)))
            y_prev, y = y, res_b_inv(y + c * (L @ x))
            xs.append(x)
            ys.append(y)
        return _stack(xs, ys)
    return _direct


def build_vu_condat(problem: AnyProblem, tau: float, c: float) -> ReductionSpec:
    """
    M1^k = tau^{-1} Id - cL*L, M2^k = 0, valid when 1/tau - c||L||^2 > 1/(2 eta).
    """
    tau, c = _check_positive("tau", tau), _check_positive("c", c)
    _, inclusion = _split(problem)
    eta = inclusion.C.eta
    if eta is None:
        raise InvalidInput("the forward operator is not cocoercive")
    norm = operator_norm(inclusion.L)
    margin = 1.0 / tau - c * norm ** 2 - (0.0 if math.isinf(eta) else 1.0 / (2.0 * eta))
    if not margin > 0:
        raise ConstraintViolated(VU_CONDAT_CONDITION, f"margin {margin:.6g} with τ = {tau:g}, "
                                                      f"c = {c:g}, ‖L‖ = {norm:.6g}")
    config = AdmmConfig(c=c, M1=MetricSchedule.condat(inclusion.L, c, tau),
                        M2=MetricSchedule.zero(inclusion.dim_g))
    return ReductionSpec(ReductionKind.VU_CONDAT, problem, {"tau": tau, "c": c, "margin": margin},
                         engine=unified_engine(inclusion, config),
                         direct=_forward_backward_direct(problem, tau, c), config=config)


def build_bch(problem: AnyProblem, tau: float, c: float) -> ReductionSpec:
    """Same metrics with C = 0 and the strict step condition c tau ||L||^2 < 1."""
    tau, c = _check_positive("tau", tau), _check_positive("c", c)
    _, inclusion = _split(problem)
    if not inclusion.C.is_zero:
        raise InvalidInput("bch needs C = 0")
    product = c * tau * operator_norm(inclusion.L) ** 2
    if not product < 1.0:
        raise ConstraintViolated(BCH_CONDITION, f"cτ‖L‖² = {product:.6g}")
    config = AdmmConfig(c=c, M1=MetricSchedule.condat(inclusion.L, c, tau),
                        M2=MetricSchedule.zero(inclusion.dim_g))
    return ReductionSpec(ReductionKind.BCH, problem, {"tau": tau, "c": c, "product": product},
                         engine=unified_engine(inclusion, config),
                         direct=_forward_backward_direct(problem, tau, c), config=config)


def build_chambolle_pock(problem: CompositeProblem, tau: float, c: float) -> ReductionSpec:
    """bch on f, g with h = 0, run through prox_{tau f} and prox_{c g*}."""
    problem = _require_composite(problem, ReductionKind.CHAMBOLLE_POCK)
    if not problem.h.is_zero:
        raise InvalidInput("chambolle_pock needs h = 0")
    spec = build_bch(problem, tau, c)
    spec.kind = ReductionKind.CHAMBOLLE_POCK
    return spec


def _admm_direct(problem: CompositeProblem, c: float, M1: np.ndarray, M2: np.ndarray) -> Engine:
    """
    x^{k+1} = argmin f(x) + <x, grad h(x^k)> + c/2 ||Lx - z^k + y^k/c||^2 + 1/2 ||x - x^k||^2_M1
    z^{k+1} = argmin g(z) + c/2 ||Lx^{k+1} - z + y^k/c||^2 + 1/2 ||z - z^k||^2_M2
    y^{k+1} = y^k + c(Lx^{k+1} - z^{k+1})
    """
    L = problem.L.matrix
    H_x = c * (L.T @ L) + M1
    H_z = c * np.eye(L.shape[0]) + M2

    def _direct(start: Start, n: int) -> Trajectory:
        x, z, y = (np.array(v, dtype=np.float64) for v in start)
        xs, ys = [], []
        for _ in range(n):
            b_x = c * (L.T @ (z - y / c)) + M1 @ x - problem.h.gradient(x)
            x = minimize_composite(problem.f, H_x, b_x, x0=x)
            Lx = L @ x
            z = minimize_composite(problem.g, H_z, c * Lx + y + M2 @ z, x0=z)
            y = y + c * (Lx - z)
            xs.append(x)
            ys.append(y)
        return _stack(xs, ys)
    return _direct


def build_classical_admm(problem: CompositeProblem, c: float) -> ReductionSpec:
    """
    M1 = M2 = 0 with h = 0. The x-subproblem needs cL*L + A invertible:
    fails fast with MetricNotPositive when cL*L is singular and A is not linear.
    """
    problem = _require_composite(problem, ReductionKind.CLASSICAL_ADMM)
    c = _check_positive("c", c)
    if not problem.h.is_zero:
        raise InvalidInput("classical ADMM needs h = 0")
    inclusion = problem.inclusion
    U = MetricOperator(c * inclusion.LtL.matrix)
    if inclusion.A.linear is None and U.min_eigenvalue <= default_tol(U):
        raise MetricNotPositive(
            f"cL*L is not positive definite (min eigenvalue {U.min_eigenvalue:.3e}) and "
            f"A = {inclusion.A.name} has no linear representation", U.min_eigenvalue)
    config = AdmmConfig.classical(inclusion, c)
    zeros_h = np.zeros((inclusion.dim_h, inclusion.dim_h))
    zeros_g = np.zeros((inclusion.dim_g, inclusion.dim_g))
    return ReductionSpec(ReductionKind.CLASSICAL_ADMM, problem, {"c": c},
                         engine=unified_engine(inclusion, config),
                         direct=_admm_direct(problem, c, zeros_h, zeros_g), config=config)


def build_variable_metric_admm(problem: CompositeProblem, c: float, M1: MetricOperator,
                               M2: MetricOperator) -> ReductionSpec:
    """Constant metrics, h allowed; direct form solves the two argmin subproblems."""
    problem = _require_composite(problem, ReductionKind.VARIABLE_METRIC_ADMM)
    c = _check_positive("c", c)
    inclusion = problem.inclusion
    config = AdmmConfig(c=c, M1=MetricSchedule.constant_metric(M1, "M1"),
                        M2=MetricSchedule.constant_metric(M2, "M2"))
    U = MetricOperator(c * inclusion.LtL.matrix + M1.matrix)
    if inclusion.A.linear is None and U.min_eigenvalue <= default_tol(U):
        raise MetricNotPositive("cL*L + M1 is not positive definite", U.min_eigenvalue)
    return ReductionSpec(ReductionKind.VARIABLE_METRIC_ADMM, problem, {"c": c},
                         engine=unified_engine(inclusion, config),
                         direct=_admm_direct(problem, c, M1.matrix, M2.matrix), config=config)


# ---------------------------------------------------------------------------
# Accelerated schemes
# ---------------------------------------------------------------------------

def _acc_problem(problem: AnyProblem) -> AccProblem:
    if isinstance(problem, CompositeProblem):
        return problem.acc_problem()
    if isinstance(problem, AccProblem):
        return problem
    raise InvalidInput("accelerated schemes need an AccProblem or a strongly convex CompositeProblem")


def build_acc_chambolle_pock(problem: AnyProblem, sched: ParamSchedule) -> ReductionSpec:
    """
    Accelerated engine with tau_k LL* + M2^k = sigma_k^{-1} Id, against

        y^{k+1} = J_{sigma_k B^{-1}}[y^k + sigma_k L(x^k + theta_{k-1}(x^k - x^{k-1}))]
        x^{k+1} = J_{(tau_{k+1}/lam) A}[x^k + (tau_{k+1}/lam)(-L*y^{k+1} - Cx^k)]

    started from x^{-1} = x^0; the engine start must satisfy z^0 = -L*y^0.
    """
    if sched.constant:
        raise InvalidInput("acc_chambolle_pock needs a validated accelerated schedule")
    acc = _acc_problem(problem)
    composite, _ = _split(problem)
    family = MetricFamily.preset(FamilyKind.CHOICE_PD, sched, acc.LLt)
    L = acc.L.matrix
    lam = sched.lam
    if composite is not None:
        res_a = lambda h, v: composite.f.prox(h, v)
        res_b_inv = lambda s, v: conjugate_prox(composite.g, s, v)
        forward = composite.h.gradient
    else:
        res_a = lambda h, v: acc.A.resolve(h, v)
        res_b_inv = lambda s, v: inverse_resolvent(acc.B, s, v)
        forward = acc.C.forward

    def _direct(start: Start, n: int) -> Trajectory:
        x, _, y = (np.array(v, dtype=np.float64) for v in start)
        x_prev = x.copy()
        xs, ys = [], []
        for k in range(n):
            sigma = sched.sigma_at(k)
            theta_prev = sched.theta_at(k - 1) if k >= 1 else 1.0
            y = res_b_inv(sigma, y + sigma * (L @ (x + theta_prev * (x - x_prev))))
            h = sched.tau_at(k + 1) / lam
            x_prev, x = x, res_a(h, x + h * (-(L.T @ y) - forward(x)))
            xs.append(x)
            ys.append(y)
        return _stack(xs, ys)

    return ReductionSpec(ReductionKind.ACC_CHAMBOLLE_POCK, problem,
                         {"lambda": lam, "tau1": sched.tau1, "sigma0": sched.sigma0},
                         engine=accelerated_engine(acc, sched, family), direct=_direct,
                         sched=sched, family=family)


def build_acc_classical_admm(problem: CompositeProblem, sched: ParamSchedule,
                             family_kind: str = "zero", horizon: int = 50) -> ReductionSpec:
    """
    Accelerated classical ADMM (lam = 1, C = 0) with the zero or tau-identity
    family; the family's sufficient condition is checked before building.

        y^{k+1} = argmin g*(y) + tau_k/2 ||L*y + z^k - x^k/tau_k||^2 + 1/2 ||y - y^k||^2_{M2^k}
        z^{k+1} = (theta_k - 1) L*y^{k+1} + theta_k prox_{f*/tau_{k+1}}(-L*y^{k+1} + x^k/tau_{k+1})
        x^{k+1} = x^k + (tau_{k+1}/theta_k)(-L*y^{k+1} - z^{k+1})
    """
    problem = _require_composite(problem, ReductionKind.ACC_CLASSICAL_ADMM)
    if not problem.h.is_zero:
        raise InvalidInput("accelerated classical ADMM needs h = 0")
    if sched.lam != 1.0:
        raise InvalidInput(f"accelerated classical ADMM needs λ = 1, got {sched.lam}")
    kind = FamilyKind(family_kind)
    if kind not in (FamilyKind.ZERO, FamilyKind.TAU_ID):
        raise InvalidInput(f"accelerated classical ADMM uses the zero or tau_id family, got {kind.value}")
    acc = problem.acc_problem()
    family = MetricFamily.preset(kind, sched, acc.LLt)
    report = check_metric_family(family, sched, horizon=horizon)
    for name, verdict in report.verdicts.items():
        if not verdict.holds:
            raise ConstraintViolated(f"({name}) {verdict.detail}",
                                     f"witness {verdict.witness:.3e} at k={verdict.worst_k}")
    L = acc.L.matrix
    g_conj = Conjugate(problem.g)

    def _direct(start: Start, n: int) -> Trajectory:
        x, z, y = (np.array(v, dtype=np.float64) for v in start)
        xs, ys = [], []
        for k in range(n):
            tau, tau_next, theta = sched.tau_at(k), sched.tau_at(k + 1), sched.theta_at(k)
            M2 = family.at(k).matrix
            H = tau * (L @ L.T) + M2
            y = minimize_composite(g_conj, H, -tau * (L @ (z - x / tau)) + M2 @ y, x0=y)
            Lty = L.T @ y
            z = (theta - 1.0) * Lty + theta * conjugate_prox(problem.f, 1.0 / tau_next,
                                                             -Lty + x / tau_next)
            x = x + (tau_next / theta) * (-Lty - z)
            xs.append(x)
            ys.append(y)
        return _stack(xs, ys)

    return ReductionSpec(ReductionKind.ACC_CLASSICAL_ADMM, problem,
                         {"family": kind.value, "tau1": sched.tau1, "sigma0": sched.sigma0},
                         engine=accelerated_engine(acc, sched, family), direct=_direct,
                         sched=sched, family=family)


# ---------------------------------------------------------------------------
# Equivalence testing
# ---------------------------------------------------------------------------

@dataclass
class EquivalenceResult:
    max_deviation: float
    deviations: np.ndarray
    tol: float

    @property
    def passes(self) -> bool:
        return self.max_deviation <= self.tol

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({"k": np.arange(1, len(self.deviations) + 1),
                             "deviation": self.deviations})


def equivalence_check(engine_a: Engine, engine_b: Engine, problem: AnyProblem, start: Start,
                      n: int, tol: float = 1e-9) -> EquivalenceResult:
    """Max over k <= n of ||x_a^k - x_b^k|| + ||y_a^k - y_b^k||."""
    _, inclusion = _split(problem)
    x0, z0, y0 = start
    if (len(x0) != inclusion.dim_h or len(z0) not in (inclusion.dim_g, inclusion.dim_h)
            or len(y0) != inclusion.dim_g):
        raise InvalidInput("start does not match the problem dimensions")
    xa, ya = engine_a(start, n)
    xb, yb = engine_b(start, n)
    if xa.shape != xb.shape or ya.shape != yb.shape:
        raise InvalidInput(f"trajectories have different shapes {xa.shape} and {xb.shape}")
    dev = np.linalg.norm(xa - xb, axis=1) + np.linalg.norm(ya - yb, axis=1)
    result = EquivalenceResult(float(np.max(dev)) if dev.size else 0.0, dev, tol)
    logger.debug("equivalence over %s iterations: max deviation %.3e", n, result.max_deviation)
    return result


def make_start(problem: AnyProblem, kind: str = "zero", seed: int = 0,
               accelerated: bool = False) -> Start:
    """Zero or seeded Gaussian start; accelerated starts use z^0 = -L*y^0."""
    _, inclusion = _split(problem)
    if kind == "zero":
        x0, z0, y0 = np.zeros(inclusion.dim_h), np.zeros(inclusion.dim_g), np.zeros(inclusion.dim_g)
    elif kind == "random":
        rng = np.random.default_rng(seed)
        x0 = rng.standard_normal(inclusion.dim_h)
        z0 = rng.standard_normal(inclusion.dim_g)
        y0 = rng.standard_normal(inclusion.dim_g)
    else:
        raise InvalidInput(f"unknown start kind {kind!r}")
    if accelerated:
        # z lives in H for the accelerated scheme
        z0 = -(inclusion.L.matrix.T @ y0)
    return x0, z0, y0


def default_steps(problem: AnyProblem, c: float = 1.0, safety: float = 0.9) -> float:
    """tau with 1/tau = (c||L||^2 + 1/(2 eta)) / safety."""
    _, inclusion = _split(problem)
    eta = inclusion.C.eta
    inv_eta = 0.0 if eta is None or math.isinf(eta) else 1.0 / eta
    return safety / (c * operator_norm(inclusion.L) ** 2 + 0.5 * inv_eta)


def default_schedule(problem: CompositeProblem) -> ParamSchedule:
    """lam = mu + 1, tau_1 = gamma/(mu + 1), sigma_0 tau_1 ||L||^2 = 1."""
    gamma = problem.gamma
    mu = problem.inclusion.C.lipschitz
    tau1 = gamma / (mu + 1.0)
    norm = operator_norm(problem.L)
    return schedule_init(gamma, mu, mu + 1.0, tau1, 1.0 / (tau1 * norm ** 2), norm)


def battery_problems(seed: int = 0) -> List[CompositeProblem]:
    return [
        gen_quadratic(8, 5, seed=seed, gamma_f=1.0, with_h=True)[0],
        gen_quadratic(5, 8, seed=seed + 1, gamma_f=1.0, with_h=False)[0],
        gen_quadratic(6, 6, seed=seed + 2, gamma_f=0.5, with_h=False)[0],
        elastic_net_tv_problem(10, seed=seed + 3, gamma_f=0.5, eps=1.0, with_h=False),
    ]


def _battery_specs(problem: CompositeProblem) -> List[ReductionSpec]:
    """Every reduction the problem is admissible for, with default parameters."""
    specs = []
    c = 1.0
    tau = default_steps(problem, c)
    specs.append(build_vu_condat(problem, tau, c))
    inclusion = problem.inclusion
    if problem.h.is_zero:
        specs.append(build_bch(problem, tau, c))
        specs.append(build_chambolle_pock(problem, tau, c))
        if inclusion.A.linear is not None or inclusion.LtL.min_eigenvalue > default_tol(inclusion.LtL):
            specs.append(build_classical_admm(problem, c))
    if problem.admissible["accelerated"]:
        specs.append(build_acc_chambolle_pock(problem, default_schedule(problem)))
    return specs


def run_battery(problems: Optional[Sequence[CompositeProblem]] = None,
                starts: Sequence[str] = ("zero", "random"), n: int = 100, tol: float = 1e-9,
                seed: int = 0, jobs: int = 1) -> pd.DataFrame:
    """
    Direct scheme against engine configuration for every admissible
    reduction x problem x start.

    Returns:
        pd.DataFrame: Columns reduction, problem, start, iterations, max_deviation, passes.
    """
    problems = battery_problems(seed) if problems is None else list(problems)
    tasks = []
    for problem in problems:
        for spec in _battery_specs(problem):
            for start_kind in starts:
                tasks.append((spec, problem, start_kind))

    def _one(task):
        spec, problem, start_kind = task
        start = make_start(problem, start_kind, seed=seed,
                           accelerated=spec.engine_name == "accelerated")
        result = equivalence_check(spec.engine, spec.direct, problem, start, n, tol)
        return {"reduction": spec.kind.value, "problem": problem.name, "start": start_kind,
                "iterations": n, "max_deviation": result.max_deviation, "passes": result.passes}

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_one, tasks))
    else:
        rows = [_one(task) for task in tasks]
    frame = pd.DataFrame(rows, columns=["reduction", "problem", "start", "iterations",
                                        "max_deviation", "passes"])
    failed = frame[~frame["passes"]]
    if len(failed):
        logger.warning("%s of %s reduction checks exceed %.1e", len(failed), len(frame), tol)
    else:
        logger.info("all %s reduction checks within %.1e", len(frame), tol)
    return frame


def build(kind: str, problem: AnyProblem, params: Dict[str, Any]) -> ReductionSpec:
    """Dispatch by kind name with parameters from a run configuration."""
    kind = ReductionKind(kind)
    c = params.get("c", 1.0)
    if kind in (ReductionKind.VU_CONDAT, ReductionKind.BCH, ReductionKind.CHAMBOLLE_POCK):
        tau = params.get("tau")
        if tau is None:
            tau = default_steps(problem, c)
        builder = {ReductionKind.VU_CONDAT: build_vu_condat, ReductionKind.BCH: build_bch,
                   ReductionKind.CHAMBOLLE_POCK: build_chambolle_pock}[kind]
        return builder(problem, tau, c)
    if kind is ReductionKind.CLASSICAL_ADMM:
        return build_classical_admm(problem, c)
    if kind is ReductionKind.VARIABLE_METRIC_ADMM:
        _, inclusion = _split(problem)
        M1 = MetricOperator.identity(inclusion.dim_h, params.get("m1_scale", 1.0))
        M2 = MetricOperator.identity(inclusion.dim_g, params.get("m2_scale", 0.0))
        return build_variable_metric_admm(problem, c, M1, M2)
    sched = schedule_from_params(problem, params)
    if kind is ReductionKind.ACC_CHAMBOLLE_POCK:
        return build_acc_chambolle_pock(problem, sched)
    return build_acc_classical_admm(problem, sched, params.get("family", "zero"))


def schedule_from_params(problem: AnyProblem, params: Dict[str, Any]) -> ParamSchedule:
    """schedule_init from explicit parameters, defaulting each to default_schedule."""
    if isinstance(problem, CompositeProblem):
        base = default_schedule(problem)
        gamma, mu = problem.gamma, problem.inclusion.C.lipschitz
    else:
        acc = _acc_problem(problem)
        gamma, mu = acc.gamma, acc.mu
        base = None
    norm = operator_norm(problem.L)
    lam = params.get("lambda", base.lam if base else mu + 1.0)
    tau1 = params.get("tau1", base.tau1 if base else gamma / (mu + 1.0))
    sigma0 = params.get("sigma0", 1.0 / (tau1 * norm ** 2))
    return schedule_init(params.get("gamma", gamma), params.get("mu", mu), lam, tau1, sigma0,
                         norm)

"""
Accelerated ADMM with dynamic step sizes for strongly monotone A + C.

Iteration for k >= 0, with M~^k = tau_k LL* + M2^k:

    y+ = (M~^k + B^{-1})^{-1}[-tau_k L(z - x/tau_k) + M2^k y]
    z+ = (theta_k/lam - 1) L*y+ + (theta_k/lam) Cx
         + (theta_k/lam) (Id + (lam/tau_{k+1}) A^{-1})^{-1}[-L*y+ + (lam/tau_{k+1}) x - Cx]
    x+ = x + (tau_{k+1}/theta_k)(-L*y+ - z+)

Schedule indexing: theta_k is computed from tau_{k+1}, then
tau_{k+2} = theta_k tau_{k+1} and sigma_{k+1} = sigma_k / theta_k, so the
product tau_{k+1} sigma_k never changes. The ledger stores tau from k = 0,
sigma from k = 0 and theta from k = 0; tau_0 is fixed by taking theta_{-1}
equal to theta_0, i.e. tau_0 = tau_1 / theta_0.
"""

import logging
import math
import threading
import time
from dataclasses import dataclass
from enum import Enum
from typing import Any, Callable, Dict, List, Optional

import numpy as np
import pandas as pd

from errors import ConstraintViolated, InvalidInput, MetricNotPositive, NoConvergence
from hilbert import MetricOperator, as_vector, default_tol, in_P_alpha
from operators import generalized_resolvent, inverse_resolvent
from unified_admm import (AdmmState, HypothesisReport, InclusionProblem, Solution, Trace,
                          TRACE_COLUMNS, Verdict, make_verdict)

logger = logging.getLogger(__name__)

RATE_TOL = 1e-8
SIGMA_TAU_RTOL = 1e-12


@dataclass(frozen=True, eq=False)
class AccProblem(InclusionProblem):
    """
    Inclusion problem with A + C gamma-strongly monotone and C monotone and
    mu-Lipschitz (mu = C.lipschitz).
    """

    gamma: float = 0.0

    def __post_init__(self):
        super().__post_init__()
        if not (self.gamma > 0 and math.isfinite(self.gamma)):
            raise InvalidInput(f"A + C must be strongly monotone with gamma > 0, got {self.gamma}")

    @classmethod
    def from_inclusion(cls, problem: InclusionProblem, gamma: float) -> "AccProblem":
        return cls(A=problem.A, B=problem.B, C=problem.C, L=problem.L, name=problem.name,
                   gamma=gamma)

    @property
    def mu(self) -> float:
        return self.C.lipschitz

    def strong_monotonicity_slack(self, samples: int = 100, seed: int = 0) -> float:
        """
        Smallest <p1-p2, w1-w2> - gamma ||p1-p2||^2 over sampled points of the
        graph of A + C, probed through p = J_A(x), x - p in A(p).
        """
        rng = np.random.default_rng(seed)
        worst = math.inf
        for _ in range(samples):
            x1, x2 = rng.standard_normal(self.dim_h), rng.standard_normal(self.dim_h)
            p1, p2 = self.A.resolve(1.0, x1), self.A.resolve(1.0, x2)
            w1 = x1 - p1 + self.C.forward(p1)
            w2 = x2 - p2 + self.C.forward(p2)
            dp = p1 - p2
            worst = min(worst, float(dp @ (w1 - w2)) - self.gamma * float(dp @ dp))
        return worst


class ParamSchedule:
    """
    Scalar ledger (lam, mu, gamma, tau_k, sigma_k, theta_k).

    Sequences are extended on demand; access is guarded by a lock so a
    schedule may be shared by runs in worker threads.
    """

    def __init__(self, gamma: float, mu: float, lam: float, tau1: float, sigma0: float,
                 L_norm: float, tau0: Optional[float] = None, constant: bool = False):
        self.gamma = gamma
        self.mu = mu
        self.lam = lam
        self.tau1 = tau1
        self.sigma0 = sigma0
        self.L_norm = L_norm
        self.constant = constant
        self.strong = mu * tau1 < gamma
        self.flags: Dict[str, bool] = {}
        theta0 = 1.0 if constant else self._theta(tau1)
        self.tau0 = tau1 / theta0 if tau0 is None else tau0
        self.tau: List[float] = [self.tau0, tau1]
        self.sigma: List[float] = [sigma0]
        self.theta: List[float] = []
        self._lock = threading.Lock()

    def __repr__(self):
        return (f"ParamSchedule(gamma={self.gamma}, mu={self.mu}, lam={self.lam}, "
                f"tau1={self.tau1}, sigma0={self.sigma0}, constant={self.constant})")

    @property
    def sigma_tau(self) -> float:
        """The invariant product tau_{k+1} sigma_k = tau_1 sigma_0."""
        return self.tau1 * self.sigma0

    def _theta(self, tau_next: float) -> float:
        return 1.0 / math.sqrt(1.0 + tau_next * (2.0 * self.gamma - self.mu * tau_next) / self.lam)

    def extend(self, k: int) -> None:
        """Make theta_k, tau_{k+2} and sigma_{k+1} available."""
        with self._lock:
            while len(self.theta) <= k:
                j = len(self.theta)
                theta = 1.0 if self.constant else self._theta(self.tau[j + 1])
                self.theta.append(theta)
                self.tau.append(theta * self.tau[j + 1])
                # tau_{k+2} sigma_{k+1} = tau_1 sigma_0 up to one rounding
                self.sigma.append(self.sigma[j] if self.constant else self.sigma_tau / self.tau[j + 2])

    def tau_at(self, k: int) -> float:
        if k >= len(self.tau):
            self.extend(k - 2)
        return self.tau[k]

    def sigma_at(self, k: int) -> float:
        if k >= len(self.sigma):
            self.extend(k - 1)
        return self.sigma[k]

    def theta_at(self, k: int) -> float:
        if k >= len(self.theta):
            self.extend(k)
        return self.theta[k]

    def to_json(self) -> Dict[str, Any]:
        return {"gamma": self.gamma, "mu": self.mu, "lambda": self.lam, "tau1": self.tau1,
                "sigma0": self.sigma0, "L_norm": self.L_norm, "tau0": self.tau0,
                "constant": self.constant, "strong": self.strong, "flags": dict(self.flags)}


def schedule_init(gamma: float, mu: float, lam: float, tau1: float, sigma0: float,
                  L_norm: float, tau0: Optional[float] = None) -> ParamSchedule:
    """
    Validate the step-size constraints and seed the ledger.

    Args:
        gamma (float): Strong monotonicity of A + C.
        mu (float): Lipschitz modulus of C.
        lam (float): Relaxation lambda.
        tau1 (float): First primal step.
        sigma0 (float): First dual step.
        L_norm (float): ||L||.
        tau0 (float, optional): Override of tau_0.

    Returns:
        ParamSchedule: Ledger with flags for each constraint and for mu*tau1 < gamma.
    """
    for name, value in (("tau1", tau1), ("sigma0", sigma0), ("lambda", lam)):
        if not (value > 0 and math.isfinite(value)):
            raise InvalidInput(f"{name} must be positive and finite, got {value}")
    if not mu >= 0:
        raise InvalidInput(f"mu must be nonnegative, got {mu}")
    if not gamma > 0:
        raise ConstraintViolated("gamma: γ > 0", f"gamma = {gamma}")
    if not mu * tau1 < 2.0 * gamma:
        raise ConstraintViolated("tau1: μτ_1 < 2γ", f"μτ_1 = {mu * tau1:g} ≥ 2γ = {2 * gamma:g}")
    if not lam >= mu + 1.0:
        raise ConstraintViolated("lambda: λ ≥ μ + 1", f"λ = {lam:g} < μ + 1 = {mu + 1:g}")
    product = sigma0 * tau1 * L_norm ** 2
    if product > 1.0 + SIGMA_TAU_RTOL:
        raise ConstraintViolated("step_product: σ_0τ_1‖L‖² ≤ 1",
                                 f"σ_0τ_1‖L‖² = {product:.6g}")
    sched = ParamSchedule(gamma, mu, lam, tau1, sigma0, L_norm, tau0=tau0)
    sched.flags = {"tau1": True, "lambda": True, "step_product": True,
                   "mu_tau1_below_gamma": sched.strong}
    logger.debug("schedule seeded: %s", sched)
    return sched


def schedule_constant(tau: float, sigma0: float, lam: float = 1.0,
                      L_norm: float = 0.0) -> ParamSchedule:
    """theta_k = 1 and tau_k = tau for all k, the non-accelerated limit."""
    if not (tau > 0 and sigma0 > 0 and lam > 0):
        raise InvalidInput("constant schedule needs tau, sigma0 and lambda positive")
    sched = ParamSchedule(0.0, 0.0, lam, tau, sigma0, L_norm, tau0=tau, constant=True)
    sched.flags = {"constant": True}
    return sched


def schedule_step(sched: ParamSchedule, k: int):
    """
    Returns:
        Tuple[float, float, float]: (theta_k, tau_{k+2}, sigma_{k+1}).
    """
    if k < 0:
        raise InvalidInput(f"schedule index must be nonnegative, got {k}")
    sched.extend(k)
    return sched.theta[k], sched.tau[k + 2], sched.sigma[k + 1]


def tau_asymptote(sched: ParamSchedule, n_max: int = 10 ** 6) -> float:
    """n_max * tau_{n_max}; tends to lam / gamma."""
    if n_max < 1000:
        raise InvalidInput(f"n_max must be at least 1000, got {n_max}")
    two_gamma, mu, lam = 2.0 * sched.gamma, sched.mu, sched.lam
    sqrt = math.sqrt
    tau = sched.tau1
    for _ in range(n_max - 1):
        tau = tau / sqrt(1.0 + tau * (two_gamma - mu * tau) / lam)
    return n_max * tau


class FamilyKind(str, Enum):
    CHOICE_PD = "choice_pd"
    INV_SIGMA_ID = "inv_sigma_id"
    ZERO = "zero"
    TAU_ID = "tau_id"
    CUSTOM = "custom"


class MetricFamily:
    """
    Self-adjoint operators k -> M2^k on G, PSD not required.

    tilde(k) returns tau_k LL* + M2^k, the metric of the y-update; for
    choice_pd it is exactly sigma_k^{-1} Id.
    """

    def __init__(self, kind: FamilyKind, generator: Callable[[int], np.ndarray],
                 sched: ParamSchedule, LLt: MetricOperator):
        self.kind = FamilyKind(kind)
        self._generator = generator
        self.sched = sched
        self.LLt = LLt
        self._cache: Dict[int, MetricOperator] = {}
        self._tilde_cache: Dict[int, MetricOperator] = {}

    def __repr__(self):
        return f"MetricFamily({self.kind.value})"

    @property
    def dim(self) -> int:
        return self.LLt.dim

    @classmethod
    def preset(cls, kind: str, sched: ParamSchedule, LLt: MetricOperator) -> "MetricFamily":
        kind = FamilyKind(kind)
        eye = np.eye(LLt.dim)
        if kind is FamilyKind.CHOICE_PD:
            gen = lambda k: eye / sched.sigma_at(k) - sched.tau_at(k) * LLt.matrix
        elif kind is FamilyKind.INV_SIGMA_ID:
            gen = lambda k: eye / sched.sigma_at(k)
        elif kind is FamilyKind.ZERO:
            gen = lambda k: np.zeros_like(eye)
        elif kind is FamilyKind.TAU_ID:
            gen = lambda k: sched.tau_at(k) * eye
        else:
            raise InvalidInput("custom families are built with MetricFamily.custom")
        return cls(kind, gen, sched, LLt)

    @classmethod
    def custom(cls, generator: Callable[[int], np.ndarray], sched: ParamSchedule,
               LLt: MetricOperator) -> "MetricFamily":
        return cls(FamilyKind.CUSTOM, generator, sched, LLt)

    def at(self, k: int) -> MetricOperator:
        U = self._cache.get(k)
        if U is None:
            U = MetricOperator(self._generator(k), psd=False)
            self._cache[k] = U
        return U

    def tilde(self, k: int) -> MetricOperator:
        U = self._tilde_cache.get(k)
        if U is None:
            if self.kind is FamilyKind.CHOICE_PD:
                U = MetricOperator.identity(self.dim, 1.0 / self.sched.sigma_at(k))
            else:
                U = MetricOperator(self.sched.tau_at(k) * self.LLt.matrix + self.at(k).matrix,
                                   psd=False)
            self._tilde_cache[k] = U
        return U


def acc_step(problem: InclusionProblem, sched: ParamSchedule, family: MetricFamily,
             state: AdmmState) -> AdmmState:
    """One accelerated iteration from (x^k, z^k, y^k), k = state.k."""
    k = state.k
    L = problem.L.matrix
    tau_k = sched.tau_at(k)
    tau_next = sched.tau_at(k + 1)
    theta = sched.theta_at(k)
    lam = sched.lam

    M_tilde = family.tilde(k)
    if M_tilde.min_eigenvalue <= default_tol(M_tilde):
        raise MetricNotPositive(
            f"tau_k LL* + M2^k is not positive definite at k={k} "
            f"(min eigenvalue {M_tilde.min_eigenvalue:.3e})", M_tilde.min_eigenvalue)
    r = L @ (state.x - tau_k * state.z) + family.at(k).matrix @ state.y
    y_next = generalized_resolvent(M_tilde, problem.B_inverse, r)

    Lty = L.T @ y_next
    Cx = problem.C.forward(state.x)
    step = lam / tau_next
    ratio = theta / lam
    w = -Lty + step * state.x - Cx
    z_next = (ratio - 1.0) * Lty + ratio * Cx + ratio * inverse_resolvent(problem.A, step, w)
    x_next = state.x + (tau_next / theta) * (-Lty - z_next)
    return AdmmState(k + 1, x_next, z_next, y_next)


def acc_step_reformulated(problem: InclusionProblem, sched: ParamSchedule, family: MetricFamily,
                          state: AdmmState, x_prev: Optional[np.ndarray] = None) -> AdmmState:
    """
    Same iteration through the equivalent forms

        y+ = (M~^k + B^{-1})^{-1}[M~^k y + L(x + theta_{k-1}(x - x_prev))]
        x+ = J_{(tau_{k+1}/lam) A}[x + (tau_{k+1}/lam)(-L*y+ - Cx)]

    with z+ recovered from the x-update. For k = 0 (no x_prev) the
    y-update falls back to the original form.
    """
    k = state.k
    L = problem.L.matrix
    tau_next = sched.tau_at(k + 1)
    theta = sched.theta_at(k)
    M_tilde = family.tilde(k)
    if x_prev is None:
        r = L @ (state.x - sched.tau_at(k) * state.z) + family.at(k).matrix @ state.y
    else:
        r = M_tilde.matrix @ state.y + L @ (state.x + sched.theta_at(k - 1) * (state.x - x_prev))
    y_next = generalized_resolvent(M_tilde, problem.B_inverse, r)
    Lty = L.T @ y_next
    h = tau_next / sched.lam
    x_next = problem.A.resolve(h, state.x + h * (-Lty - problem.C.forward(state.x)))
    z_next = -Lty - (theta / tau_next) * (x_next - state.x)
    return AdmmState(k + 1, x_next, z_next, y_next)


def acc_run(problem: InclusionProblem, sched: ParamSchedule, family: MetricFamily, x0, z0, y0,
            max_iters: int = 10000, stop_tol: float = 0.0,
            monitor: Optional[Callable[[AdmmState], None]] = None,
            raise_on_max_iters: bool = False, log_every: int = 1000) -> Trace:
    """
    Run acc_step for up to max_iters iterations.

    stop_tol = 0 disables the successive-change test, so certificate runs
    always produce max_iters steps.
    """
    state = AdmmState.start(problem, x0, z0, y0, z_in_h=True)
    trace = Trace([state], wall_ns=[0])
    logger.info("accelerated ADMM on %s: family=%s, %s", problem.name, family.kind.value, sched)
    t0 = time.perf_counter_ns()
    change = math.inf
    for _ in range(max_iters):
        nxt = acc_step(problem, sched, family, state)
        if not nxt.is_finite():
            raise NoConvergence(f"iterates diverged at k={nxt.k}", last_residual=math.inf,
                                trace=trace)
        change = nxt.distance(state)
        scale = 1.0 + state.norm()
        trace.append(nxt, time.perf_counter_ns() - t0)
        if monitor is not None:
            monitor(nxt)
        state = nxt
        if log_every and nxt.k % log_every == 0:
            logger.debug("k=%s change %.3e tau=%.6g", nxt.k, change, sched.tau_at(nxt.k))
        if stop_tol > 0 and change <= stop_tol * scale:
            trace.converged = True
            logger.info("converged after %s iterations", nxt.k)
            return trace
    if stop_tol > 0:
        logger.warning("stopped at max_iters=%s with change %.3e", max_iters, change)
        if raise_on_max_iters:
            raise NoConvergence(f"no convergence within {max_iters} iterations",
                                last_residual=change, trace=trace)
    else:
        trace.converged = True
    return trace


def check_metric_family(family: MetricFamily, sched: ParamSchedule, horizon: int = 100,
                        tol: Optional[float] = None) -> HypothesisReport:
    """
    Per-k witnesses for

        (dominance) tau_k LL* + M2^k >= sigma_k^{-1} Id
        (decrease) (tau_k/tau_{k+1}) LL* + M2^k/tau_{k+1} >= (tau_{k+1}/tau_{k+2}) LL* + M2^{k+1}/tau_{k+2}

    plus the sufficient condition of each preset.
    """
    LLt = family.LLt
    if tol is None:
        tol = default_tol(LLt, *(family.tilde(k) for k in range(horizon + 1)))
    sched.extend(horizon + 1)
    eye = np.eye(family.dim)
    dominance, decrease = [], []
    for k in range(horizon + 1):
        t0, t1, t2 = sched.tau_at(k), sched.tau_at(k + 1), sched.tau_at(k + 2)
        dominance.append(MetricOperator(family.tilde(k).matrix - eye / sched.sigma_at(k),
                                        psd=False).min_eigenvalue)
        lhs = (t0 / t1) * LLt.matrix + family.at(k).matrix / t1
        rhs = (t1 / t2) * LLt.matrix + family.at(k + 1).matrix / t2
        decrease.append(MetricOperator(lhs - rhs, psd=False).min_eigenvalue)
    verdicts: Dict[str, Verdict] = {
        "dominates_dual_step": make_verdict("dominates_dual_step", dominance, -tol,
                                            "min eig(tau_k LL* + M2^k - Id/sigma_k)"),
        "scaled_metric_nonincreasing": make_verdict("scaled_metric_nonincreasing", decrease, -tol,
                                                    "min eig of the decrease difference"),
    }

    st = sched.sigma_tau
    lam_min = LLt.min_eigenvalue
    if family.kind in (FamilyKind.INV_SIGMA_ID, FamilyKind.ZERO, FamilyKind.TAU_ID):
        verdicts["mu_tau1_below_gamma"] = Verdict(
            "mu_tau1_below_gamma", sched.strong or sched.constant,
            sched.gamma - sched.mu * sched.tau1, detail="μτ_1 < γ")
    if family.kind is FamilyKind.ZERO:
        verdicts["LLt_lower_bound"] = Verdict("LLt_lower_bound", lam_min >= 1.0 / st - tol,
                                              lam_min - 1.0 / st, detail="LL* in P_{1/(σ_0τ_1)}")
        tight = st * sched.L_norm ** 2
        verdicts["step_product_tight"] = Verdict("step_product_tight",
                                                 abs(tight - 1.0) <= 1e-10, tight - 1.0,
                                                 detail="σ_0τ_1‖L‖² = 1")
    elif family.kind is FamilyKind.TAU_ID:
        holds = st >= 1.0 or in_P_alpha(LLt, (1.0 - st) / st, tol)
        verdicts["tau_id_lower_bound"] = Verdict(
            "tau_id_lower_bound", holds, lam_min - max((1.0 - st) / st, 0.0),
            detail="σ_0τ_1 ≥ 1 or LL* in P_{(1-σ_0τ_1)/(σ_0τ_1)}")

    report = HypothesisReport(f"family:{family.kind.value}", horizon, verdicts,
                              required=list(verdicts), alternatives=[])
    if report.hypotheses_met:
        logger.info("metric family %s satisfies the family conditions up to k=%s",
                    family.kind.value, horizon)
    else:
        logger.warning("metric family %s fails: %s", family.kind.value,
                       ", ".join(n for n, v in verdicts.items() if not v.holds))
    return report


@dataclass
class RateCertificate:
    """Left-hand sides for n >= 2 against the constant right-hand side."""

    rhs: float
    n: np.ndarray
    lhs: np.ndarray
    envelope: np.ndarray
    errors: np.ndarray

    @property
    def slack(self) -> np.ndarray:
        return self.rhs - self.lhs

    @property
    def min_slack(self) -> float:
        return float(np.min(self.slack)) if self.slack.size else math.inf

    def passes(self, tol: float = RATE_TOL) -> bool:
        return bool(np.all(self.lhs <= self.rhs + tol * (1.0 + self.rhs)))

    def envelope_holds(self, tol: float = RATE_TOL) -> bool:
        return bool(np.all(self.errors <= self.envelope + tol * (1.0 + self.envelope)))

    def to_json(self) -> Dict[str, Any]:
        return {"rhs": self.rhs, "min_slack": self.min_slack, "passes": self.passes(),
                "envelope_holds": self.envelope_holds(), "n_max": int(self.n[-1]) if self.n.size else 0}


def rate_certificate(problem: AccProblem, sched: ParamSchedule, family: MetricFamily,
                     trace: Trace, solution: Solution) -> RateCertificate:
    """
    For every n >= 2:

        lam ||x^n - x||^2 / tau_{n+1}^2 + ((1 - s ||L||^2) / s) ||y^n - v||^2
            <= lam ||x^1 - x||^2 / tau_2^2 + ||y^1 - v||^2_{tau_1 LL* + M2^1} / tau_2
               + ||x^1 - x^0||^2 / tau_1^2 + (2 / tau_1) <L(x^1 - x^0), y^1 - v>

    with s = sigma_0 tau_1. Also reports the envelope ||x^n - x|| <= sqrt(RHS/lam) tau_{n+1}.
    """
    if len(trace) < 3:
        raise InvalidInput("rate certificate needs at least two iterations")
    x_star, v_star = problem.validate_solution(solution)
    lam = sched.lam
    L = problem.L.matrix
    st = sched.sigma_tau
    coef = (1.0 - st * sched.L_norm ** 2) / st
    s0, s1 = trace[0], trace[1]
    dx1 = s1.x - x_star
    dy1 = s1.y - v_star
    step1 = s1.x - s0.x
    tau1, tau2 = sched.tau_at(1), sched.tau_at(2)
    rhs = (lam * float(dx1 @ dx1) / tau2 ** 2
           + family.tilde(1).seminorm_sq(dy1) / tau2
           + float(step1 @ step1) / tau1 ** 2
           + 2.0 / tau1 * float((L @ step1) @ dy1))

    ns, lhs, env, errs = [], [], [], []
    root = math.sqrt(max(rhs, 0.0) / lam)
    for n in range(2, len(trace)):
        s = trace[n]
        dx, dy = s.x - x_star, s.y - v_star
        tau = sched.tau_at(n + 1)
        ns.append(n)
        lhs.append(lam * float(dx @ dx) / tau ** 2 + coef * float(dy @ dy))
        errs.append(math.sqrt(float(dx @ dx)))
        env.append(root * tau)
    cert = RateCertificate(rhs=rhs, n=np.array(ns), lhs=np.array(lhs), envelope=np.array(env),
                           errors=np.array(errs))
    if cert.passes():
        logger.info("rate bound holds for n <= %s (min slack %.3e)", ns[-1], cert.min_slack)
    else:
        logger.warning("rate bound violated (min slack %.3e)", cert.min_slack)
    return cert


def empirical_order(trace: Trace, x_star: np.ndarray, n_min: int = 100, n_max: int = 10000,
                    floor: float = 1e-13) -> float:
    """Least-squares slope of log ||x^n - x*|| against log n, skipping errors at round-off level."""
    x_star = as_vector(x_star)
    cutoff = floor * (1.0 + float(np.linalg.norm(x_star)))
    ns, errs = [], []
    for n in range(max(n_min, 1), min(n_max, len(trace) - 1) + 1):
        err = float(np.linalg.norm(trace[n].x - x_star))
        if err > cutoff:
            ns.append(n)
            errs.append(err)
    if len(ns) < 2:
        raise InvalidInput("not enough iterates above the round-off floor to fit an order")
    slope, _ = np.polyfit(np.log(ns), np.log(errs), 1)
    return float(slope)


def schedule_frame(sched: ParamSchedule, n: int) -> pd.DataFrame:
    """Rows k = 0..n with columns k, tau_k, sigma_k, theta_k, n_tau_n."""
    sched.extend(n)
    rows = [{"k": k, "tau_k": sched.tau_at(k), "sigma_k": sched.sigma_at(k),
             "theta_k": sched.theta_at(k), "n_tau_n": k * sched.tau_at(k)}
            for k in range(n + 1)]
    return pd.DataFrame(rows, columns=["k", "tau_k", "sigma_k", "theta_k", "n_tau_n"])


def acc_trace_frame(problem: AccProblem, trace: Trace, solution: Optional[Solution] = None,
                    sched: Optional[ParamSchedule] = None,
                    family: Optional[MetricFamily] = None) -> pd.DataFrame:
    """Trace CSV rows plus lhs_rate and rhs_rate (NaN where undefined)."""
    cert = None
    if solution is not None:
        solution = problem.validate_solution(solution)
        if sched is not None and family is not None and len(trace) >= 3:
            cert = rate_certificate(problem, sched, family, trace, solution)
    rows = []
    for i in range(1, len(trace)):
        s = trace[i]
        kkt_p, kkt_d = problem.kkt_residual(s.x, s.y)
        row = {col: math.nan for col in TRACE_COLUMNS}
        row.update({"k": s.k, "kkt_primal": kkt_p, "kkt_dual": kkt_d,
                    "wall_ns": trace.wall_ns[i], "lhs_rate": math.nan, "rhs_rate": math.nan})
        if solution is not None:
            x_star, y_star = solution
            row["dist_x"] = float(np.linalg.norm(s.x - x_star))
            # z is stationary at -L*y* in the accelerated scheme
            row["dist_z"] = float(np.linalg.norm(s.z + problem.L.matrix.T @ y_star))
            row["dist_y"] = float(np.linalg.norm(s.y - y_star))
        if cert is not None and i >= 2:
            row["lhs_rate"] = float(cert.lhs[i - 2])
            row["rhs_rate"] = cert.rhs
        rows.append(row)
    return pd.DataFrame(rows, columns=TRACE_COLUMNS + ["lhs_rate", "rhs_rate"])

"""
Batch experiment runner.

    python cli.py run config.json [more.json ...] [--jobs N]
    python cli.py certify config.json [--solution sol.json]
    python cli.py compare a.json b.json [--tol 1e-9]
    python cli.py schedule config.json [--n 1000]
    python cli.py check config.json
    python cli.py battery [--n 100] [--jobs N]

Exit codes: 0 ok, 1 malformed config, 2 no convergence, 3 constraint
violated or metric not positive, 4 invalid reference solution.
"""

import argparse
import logging
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np
import pandas as pd

import reductions
from accelerated import (AccProblem, FamilyKind, MetricFamily, ParamSchedule, acc_run,
                         acc_trace_frame, check_metric_family, rate_certificate, schedule_frame,
                         tau_asymptote)
from config import LOG_LEVEL, resolve_seed
from errors import (ConstraintViolated, InvalidInput, MetricNotPositive, NoConvergence,
                    SolutionInvalid)
from problems import (CompositeProblem, SolutionCertificate, certify, elastic_net_tv_problem,
                      gen_quadratic, long_run_solution, zero_problem)
from unified_admm import (AdmmConfig, MetricSchedule, Trace, certify_trace,
                          check_hypotheses_thm_C0, check_hypotheses_thm_cocoercive, run,
                          summability_report, trace_frame)
from utils import (default_export_path, dumps, export_frame, export_json, line_of, load_json,
                   parse_json, validate_label)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NO_CONVERGENCE = 2
EXIT_CONSTRAINT = 3
EXIT_SOLUTION = 4

PROBLEM_KINDS = ("zero", "quadratic", "elastic_net_tv", "file")
START_KINDS = ("zero", "random")
SOLUTION_TOL = 1e-8


class ConfigError(InvalidInput):
    """Malformed run configuration, located by line."""

    def __init__(self, source: str, line: int, message: str):
        super().__init__(f"{source}: line {line}: {message}")
        self.line = line


@dataclass
class RunConfig:
    """A parsed configuration document; text is kept to locate errors."""

    problem: Dict[str, Any]
    engine: str = "unified"
    metric: Dict[str, Any] = field(default_factory=dict)
    family: str = "choice_pd"
    params: Dict[str, Any] = field(default_factory=dict)
    max_iters: int = 10000
    stop_tol: float = 1e-10
    seed: int = 0
    start: str = "zero"
    output: Dict[str, str] = field(default_factory=dict)
    source: str = "<config>"
    text: str = ""

    def fail(self, key: str, message: str) -> ConfigError:
        return ConfigError(self.source, line_of(self.text, key), message)

    @property
    def label(self) -> str:
        name = self.problem.get("name") or self.problem.get("kind", "run")
        return name if validate_label(name) else "run"

    @property
    def engine_kind(self) -> str:
        return self.engine.split(":", 1)[0]

    @property
    def reduction(self) -> Optional[str]:
        return self.engine.split(":", 1)[1] if ":" in self.engine else None

    @property
    def is_accelerated(self) -> bool:
        if self.engine_kind == "accelerated":
            return True
        return self.reduction in (reductions.ReductionKind.ACC_CHAMBOLLE_POCK.value,
                                  reductions.ReductionKind.ACC_CLASSICAL_ADMM.value)

    @classmethod
    def parse(cls, text: str, source: str = "<config>") -> "RunConfig":
        ok, payload = parse_json(text, source)
        if not ok:
            # parse_json already names the line
            raise InvalidInput(payload)
        if not isinstance(payload, dict):
            raise ConfigError(source, 1, "configuration must be a JSON object")
        cfg = cls(problem=payload.get("problem"), source=source, text=text)
        if not isinstance(cfg.problem, dict):
            raise cfg.fail("problem", "missing or malformed 'problem' object")
        if cfg.problem.get("kind") not in PROBLEM_KINDS:
            raise cfg.fail("kind", f"problem kind must be one of {', '.join(PROBLEM_KINDS)}")

        cfg.engine = payload.get("engine", "unified")
        kind, _, rest = str(cfg.engine).partition(":")
        if kind in ("unified", "accelerated") and not rest:
            pass
        elif kind in ("reduction", "direct"):
            if rest not in {k.value for k in reductions.ReductionKind}:
                raise cfg.fail("engine", f"unknown reduction {rest!r}")
        else:
            raise cfg.fail("engine", f"unknown engine {cfg.engine!r}")

        cfg.family = payload.get("family", "choice_pd")
        if cfg.family not in {k.value for k in FamilyKind} - {FamilyKind.CUSTOM.value}:
            raise cfg.fail("family", f"unknown metric family {cfg.family!r}")
        for key in ("metric", "params", "output"):
            value = payload.get(key, {})
            if not isinstance(value, dict):
                raise cfg.fail(key, f"'{key}' must be an object")
            setattr(cfg, key, value)
        for name, value in cfg.metric.items():
            if name not in ("M1", "M2"):
                raise cfg.fail(name, f"unknown metric {name!r}; expected M1 or M2")
            if not isinstance(value, dict):
                raise cfg.fail(name, f"metric {name} must be an object with a 'kind'")
        for key, value in cfg.params.items():
            if key != "family" and not isinstance(value, (int, float)):
                raise cfg.fail(key, f"parameter {key!r} must be a number")
        c = cfg.params.get("c", 1.0)
        if not math.isfinite(c) or c <= 0:
            raise cfg.fail("c", "penalty c must be a positive finite number")

        cfg.max_iters = payload.get("max_iters", 10000)
        if not isinstance(cfg.max_iters, int) or cfg.max_iters < 1:
            raise cfg.fail("max_iters", "max_iters must be a positive integer")
        cfg.stop_tol = payload.get("stop_tol", 1e-10)
        if not isinstance(cfg.stop_tol, (int, float)) or cfg.stop_tol < 0:
            raise cfg.fail("stop_tol", "stop_tol must be a nonnegative number")
        seed = payload.get("seed")
        if seed is not None and not isinstance(seed, int):
            raise cfg.fail("seed", "seed must be an integer")
        cfg.seed = resolve_seed(seed)
        cfg.start = payload.get("start", "zero")
        if cfg.start not in START_KINDS:
            raise cfg.fail("start", f"start must be one of {', '.join(START_KINDS)}")
        return cfg

    @classmethod
    def load(cls, path: str) -> "RunConfig":
        try:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as e:
            raise ConfigError(path, 1, str(e)) from e
        return cls.parse(text, path)


# ---------------------------------------------------------------------------
# Problem and engine construction
# ---------------------------------------------------------------------------

def build_problem(cfg: RunConfig, need_solution: bool = False
                  ) -> Tuple[CompositeProblem, Optional[SolutionCertificate]]:
    spec = cfg.problem
    kind = spec["kind"]
    try:
        if kind == "zero":
            return zero_problem(int(spec.get("dim", 1)))
        if kind == "quadratic":
            return gen_quadratic(int(spec.get("dim_h", 8)), int(spec.get("dim_g", 5)), seed=cfg.seed,
                                 gamma_f=float(spec.get("gamma_f", 1.0)),
                                 with_h=bool(spec.get("with_h", True)))
        if kind == "elastic_net_tv":
            problem = elastic_net_tv_problem(
                int(spec.get("n", 50)), seed=cfg.seed, gamma_f=float(spec.get("gamma_f", 0.0)),
                eps=float(spec.get("eps", 0.1)), weight_f=float(spec.get("weight_f", 0.1)),
                weight_g=float(spec.get("weight_g", 0.1)),
                zero_target=bool(spec.get("zero_target", False)),
                with_h=bool(spec.get("with_h", True)))
            cert = None
            if need_solution or spec.get("reference") == "long_run":
                cert = long_run_solution(problem)
            return problem, cert
        ok, payload = load_json(spec.get("path", ""))
        if not ok:
            raise cfg.fail("path", payload)
        if not isinstance(payload, dict) or not isinstance(payload.get("problem", payload), dict):
            raise cfg.fail("path", f"{spec.get('path')}: problem file must hold a JSON object")
        problem = CompositeProblem.from_json(payload.get("problem", payload))
        cert = None
        if "solution" in payload:
            if not isinstance(payload["solution"], dict):
                raise cfg.fail("path", f"{spec.get('path')}: 'solution' must be an object")
            sol = SolutionCertificate.from_json(payload["solution"])
            cert = certify(problem, sol.x_star, sol.v_star, sol.provenance, SOLUTION_TOL)
        return problem, cert
    except (TypeError, ValueError) as e:
        if isinstance(e, InvalidInput):
            raise
        raise cfg.fail("problem", f"bad problem arguments: {e}") from e


def _metric(cfg: RunConfig, name: str, dim: int, problem: CompositeProblem, c: float) -> MetricSchedule:
    payload = cfg.metric.get(name, {"kind": "zero"})
    try:
        return MetricSchedule.from_json(payload, dim, L=problem.L, c=c)
    except InvalidInput as e:
        raise cfg.fail(name, str(e)) from e


def unified_config(cfg: RunConfig, problem: CompositeProblem) -> AdmmConfig:
    c = float(cfg.params.get("c", 1.0))
    inclusion = problem.inclusion
    return AdmmConfig(c=c, M1=_metric(cfg, "M1", inclusion.dim_h, problem, c),
                      M2=_metric(cfg, "M2", inclusion.dim_g, problem, c),
                      max_iters=cfg.max_iters, stop_tol=cfg.stop_tol)


def accelerated_setup(cfg: RunConfig, problem: CompositeProblem
                      ) -> Tuple[AccProblem, ParamSchedule, MetricFamily]:
    acc = problem.acc_problem()
    sched = reductions.schedule_from_params(problem, cfg.params)
    return acc, sched, MetricFamily.preset(cfg.family, sched, acc.LLt)


def _reduction_params(cfg: RunConfig) -> Dict[str, Any]:
    params = dict(cfg.params)
    params.setdefault("family", cfg.family if cfg.family in ("zero", "tau_id") else "zero")
    return params


@dataclass
class Execution:
    """A run together with the objects that produced it; trace is None until launched."""

    problem: CompositeProblem
    trace: Optional[Trace] = None
    config: Optional[AdmmConfig] = None
    acc: Optional[AccProblem] = None
    sched: Optional[ParamSchedule] = None
    family: Optional[MetricFamily] = None

    def frame(self, solution=None) -> pd.DataFrame:
        if self.config is not None:
            return trace_frame(self.problem.inclusion, self.config, self.trace, solution)
        return acc_trace_frame(self.acc, self.trace, solution, self.sched, self.family)


def prepare(cfg: RunConfig, problem: CompositeProblem) -> Execution:
    """Build the configured engine without running it."""
    if cfg.engine_kind == "direct":
        raise cfg.fail("engine", "direct schemes produce trajectories only; use compare")
    config = sched = family = acc = None
    if cfg.engine_kind == "unified":
        config = unified_config(cfg, problem)
    elif cfg.engine_kind == "accelerated":
        acc, sched, family = accelerated_setup(cfg, problem)
    else:
        spec = reductions.build(cfg.reduction, problem, _reduction_params(cfg))
        if spec.config is not None:
            base = spec.config
            config = AdmmConfig(c=base.c, M1=base.M1, M2=base.M2, max_iters=cfg.max_iters,
                                stop_tol=cfg.stop_tol)
        else:
            acc, sched, family = problem.acc_problem(), spec.sched, spec.family
    return Execution(problem, config=config, acc=acc, sched=sched, family=family)


def launch(cfg: RunConfig, result: Execution, raise_on_max_iters: bool = True) -> Execution:
    """Run a prepared engine from the configured start and attach its trace."""
    problem = result.problem
    x0, z0, y0 = reductions.make_start(problem, cfg.start, seed=cfg.seed,
                                       accelerated=cfg.is_accelerated)
    if result.config is not None:
        result.trace = run(problem.inclusion, result.config, x0, z0, y0,
                           raise_on_max_iters=raise_on_max_iters)
    else:
        result.trace = acc_run(result.acc, result.sched, result.family, x0, z0, y0,
                               max_iters=cfg.max_iters, stop_tol=cfg.stop_tol,
                               raise_on_max_iters=raise_on_max_iters)
    return result


def execute(cfg: RunConfig, problem: CompositeProblem, raise_on_max_iters: bool = True) -> Execution:
    """Run the configured engine from the configured start."""
    return launch(cfg, prepare(cfg, problem), raise_on_max_iters)


def engine_for(cfg: RunConfig, problem: CompositeProblem) -> reductions.Engine:
    """Trajectory callable of a configuration, for compare."""
    if cfg.engine_kind == "unified":
        return reductions.unified_engine(problem.inclusion, unified_config(cfg, problem))
    if cfg.engine_kind == "accelerated":
        acc, sched, family = accelerated_setup(cfg, problem)
        return reductions.accelerated_engine(acc, sched, family)
    spec = reductions.build(cfg.reduction, problem, _reduction_params(cfg))
    return spec.engine if cfg.engine_kind == "reduction" else spec.direct


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def _output(cfg: RunConfig, key: str, override: Optional[str], kind: str, suffix: str) -> str:
    return override or cfg.output.get(key) or default_export_path(cfg.label, kind, suffix)


def _write_frame(frame: pd.DataFrame, path: str, timing: bool) -> None:
    if not timing and "wall_ns" in frame.columns:
        frame = frame.drop(columns=["wall_ns"])
    ok, message = export_frame(frame, path)
    if not ok:
        raise InvalidInput(message)
    logger.info(message)


def _write_report(payload: Dict[str, Any], path: str) -> None:
    ok, message = export_json(payload, path)
    if not ok:
        raise InvalidInput(message)
    logger.info(message)


def cmd_run(cfg: RunConfig, out: Optional[str] = None, timing: bool = False) -> int:
    problem, cert = build_problem(cfg)
    path = _output(cfg, "trace", out, "trace", "csv")
    result = prepare(cfg, problem)
    try:
        launch(cfg, result)
    except NoConvergence as e:
        if isinstance(e.trace, Trace) and len(e.trace) > 1:
            result.trace = e.trace
            _write_frame(result.frame(), path, timing)
        raise
    solution = cert.solution if cert is not None else None
    frame = result.frame(solution)
    _write_frame(frame, path, timing)
    last = frame.iloc[-1]
    logger.info("%s: %s iterations, final kkt %.3e / %.3e", cfg.label, result.trace.iterations,
                last["kkt_primal"], last["kkt_dual"])
    return EXIT_OK


def _load_solution(problem: CompositeProblem, path: str) -> SolutionCertificate:
    ok, payload = load_json(path)
    if not ok:
        raise InvalidInput(payload)
    if not isinstance(payload, dict) or not isinstance(payload.get("solution", payload), dict):
        raise InvalidInput(f"{path}: solution file must hold a JSON object")
    sol = SolutionCertificate.from_json(payload.get("solution", payload))
    return certify(problem, sol.x_star, sol.v_star, sol.provenance, SOLUTION_TOL)


def _hypothesis_reports(problem: CompositeProblem, config: AdmmConfig, horizon: int) -> Dict[str, Any]:
    inclusion = problem.inclusion
    reports = {}
    if inclusion.C.is_cocoercive:
        reports["cocoercive"] = check_hypotheses_thm_cocoercive(inclusion, config, horizon).to_json()
    if inclusion.C.is_zero:
        reports["C0"] = check_hypotheses_thm_C0(inclusion, config, horizon).to_json()
    return reports


def cmd_certify(cfg: RunConfig, solution_path: Optional[str] = None, out: Optional[str] = None,
                horizon: int = 100) -> int:
    """Run, then report hypothesis verdicts and per-step certificates as JSON."""
    problem, cert = build_problem(cfg, need_solution=solution_path is None)
    if solution_path is not None:
        cert = _load_solution(problem, solution_path)
    if cert is None:
        raise InvalidInput("certify needs a reference solution")
    result = execute(cfg, problem, raise_on_max_iters=False)
    solution = cert.solution
    trace = result.trace
    last = trace.last
    report: Dict[str, Any] = {
        "problem": problem.name, "engine": cfg.engine, "seed": cfg.seed,
        "iterations": trace.iterations, "converged": trace.converged,
        "final_kkt": list(problem.inclusion.kkt_residual(last.x, last.y)),
        "solution": {"provenance": cert.provenance, "kkt_primal": cert.kkt_primal,
                     "kkt_dual": cert.kkt_dual},
    }
    if result.config is not None:
        report["hypotheses"] = _hypothesis_reports(problem, result.config, horizon)
        certs = certify_trace(problem.inclusion, result.config, trace, solution)
        slacks = [c.slack for c in certs]
        report["fejer"] = {"min_slack": min(slacks) if slacks else math.inf,
                           "worst_k": int(np.argmin(slacks)) if slacks else None,
                           "passes": all(c.passes() for c in certs)}
        report["summability"] = summability_report(problem.inclusion, result.config,
                                                   trace).to_json()
    else:
        report["hypotheses"] = {"family": check_metric_family(result.family, result.sched,
                                                              horizon).to_json()}
        report["schedule"] = result.sched.to_json()
        n = trace.iterations
        report["n_tau_n"] = {"n": n, "value": n * result.sched.tau_at(n),
                             "limit": result.sched.lam / result.sched.gamma}
        if len(trace) >= 3:
            report["rate"] = rate_certificate(result.acc, result.sched, result.family, trace,
                                              solution).to_json()
    _write_report(report, _output(cfg, "report", out, "certificate", "json"))
    return EXIT_OK


def cmd_compare(cfg_a: RunConfig, cfg_b: RunConfig, tol: float = 1e-9, out: Optional[str] = None,
                report_out: Optional[str] = None) -> int:
    if cfg_a.problem != cfg_b.problem or cfg_a.seed != cfg_b.seed:
        raise ConfigError(cfg_b.source, line_of(cfg_b.text, "problem"),
                          f"problem or seed differs from {cfg_a.source}")
    problem, _ = build_problem(cfg_a)
    accelerated = cfg_a.is_accelerated or cfg_b.is_accelerated
    start = reductions.make_start(problem, cfg_a.start, seed=cfg_a.seed, accelerated=accelerated)
    n = min(cfg_a.max_iters, cfg_b.max_iters)
    result = reductions.equivalence_check(engine_for(cfg_a, problem), engine_for(cfg_b, problem),
                                          problem, start, n, tol)
    _write_frame(result.to_frame(), _output(cfg_a, "deviation", out, "deviation", "csv"), True)
    verdict = "PASS" if result.passes else "FAIL"
    logger.info("%s vs %s over %s iterations: max deviation %.3e (%s at %.1e)", cfg_a.engine,
                cfg_b.engine, n, result.max_deviation, verdict, tol)
    payload = {"engine_a": cfg_a.engine, "engine_b": cfg_b.engine, "iterations": n, "tol": tol,
               "max_deviation": result.max_deviation, "passes": result.passes}
    if report_out:
        _write_report(payload, report_out)
    print(dumps(payload))
    return EXIT_OK


def cmd_schedule(cfg: RunConfig, n: int = 1000, out: Optional[str] = None) -> int:
    problem, _ = build_problem(cfg)
    sched = reductions.schedule_from_params(problem, cfg.params)
    frame = schedule_frame(sched, n)
    frame["limit"] = sched.lam / sched.gamma
    _write_frame(frame, _output(cfg, "schedule", out, "schedule", "csv"), True)
    if n >= 1000:
        logger.info("n tau_n at n=%s: %.9g (limit %.9g)", n, tau_asymptote(sched, n),
                    sched.lam / sched.gamma)
    return EXIT_OK


def cmd_check(cfg: RunConfig, out: Optional[str] = None, horizon: int = 100) -> int:
    """Hypothesis reports without running; reduction guards raise as usual."""
    problem, _ = build_problem(cfg)
    if cfg.engine_kind == "unified":
        reports = _hypothesis_reports(problem, unified_config(cfg, problem), horizon)
    elif cfg.engine_kind == "accelerated":
        _, sched, family = accelerated_setup(cfg, problem)
        reports = {"family": check_metric_family(family, sched, horizon).to_json()}
    else:
        spec = reductions.build(cfg.reduction, problem, _reduction_params(cfg))
        if spec.config is not None:
            reports = _hypothesis_reports(problem, spec.config, horizon)
        else:
            reports = {"family": check_metric_family(spec.family, spec.sched, horizon).to_json()}
    payload = {"problem": problem.name, "engine": cfg.engine, "horizon": horizon,
               "reports": reports}
    _write_report(payload, _output(cfg, "report", out, "check", "json"))
    return EXIT_OK


def cmd_battery(n: int = 100, tol: float = 1e-9, seed: Optional[int] = None, jobs: int = 1,
                out: Optional[str] = None) -> int:
    frame = reductions.run_battery(n=n, tol=tol, seed=resolve_seed(seed), jobs=jobs)
    _write_frame(frame, out or default_export_path("reductions", "battery"), True)
    return EXIT_OK


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------

def guarded(action: Callable[[], int]) -> int:
    """Map library exceptions to exit codes."""
    try:
        return action()
    except NoConvergence as e:
        logger.error("no convergence: %s (last residual %.3e)", e, e.last_residual)
        return EXIT_NO_CONVERGENCE
    except (ConstraintViolated, MetricNotPositive) as e:
        logger.error("%s", e)
        return EXIT_CONSTRAINT
    except SolutionInvalid as e:
        logger.error("invalid reference solution: %s", e)
        return EXIT_SOLUTION
    except InvalidInput as e:
        logger.error("malformed configuration: %s", e)
        return EXIT_CONFIG


def _parse_args(argv: Optional[List[str]] = None) -> argparse.Namespace:
    parser = argparse.ArgumentParser(prog="splitmono",
                                     description="Variable-metric and accelerated ADMM experiments.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run configurations and write trace CSVs")
    p.add_argument("configs", nargs="+")
    p.add_argument("--out", help="trace path (single config only)")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--timing", action="store_true", help="keep the wall_ns column")

    p = sub.add_parser("certify", help="run and write a certificate report")
    p.add_argument("config")
    p.add_argument("--solution")
    p.add_argument("--out")
    p.add_argument("--horizon", type=int, default=100)

    p = sub.add_parser("compare", help="max deviation between two configurations")
    p.add_argument("config_a")
    p.add_argument("config_b")
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--out")
    p.add_argument("--report")

    p = sub.add_parser("schedule", help="dump tau, sigma, theta and n tau_n")
    p.add_argument("config")
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--out")

    p = sub.add_parser("check", help="hypothesis reports")
    p.add_argument("config")
    p.add_argument("--out")
    p.add_argument("--horizon", type=int, default=100)

    p = sub.add_parser("battery", help="reduction equivalence battery")
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--seed", type=int)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out")
    return parser.parse_args(argv)


def main(argv: Optional[List[str]] = None) -> int:
    args = _parse_args(argv)
    logging.basicConfig(level=LOG_LEVEL, format="%(asctime)s %(levelname)s %(name)s: %(message)s")

    if args.command == "run":
        if args.out and len(args.configs) > 1:
            logger.error("--out needs a single config")
            return EXIT_CONFIG

        def _one(path: str) -> int:
            return guarded(lambda: cmd_run(RunConfig.load(path), args.out, args.timing))

        if args.jobs > 1:
            with ThreadPoolExecutor(max_workers=args.jobs) as pool:
                codes = list(pool.map(_one, args.configs))
        else:
            codes = [_one(path) for path in args.configs]
        return max(codes)
    if args.command == "certify":
        return guarded(lambda: cmd_certify(RunConfig.load(args.config), args.solution, args.out,
                                           args.horizon))
    if args.command == "compare":
        return guarded(lambda: cmd_compare(RunConfig.load(args.config_a),
                                           RunConfig.load(args.config_b), args.tol, args.out,
                                           args.report))
    if args.command == "schedule":
        return guarded(lambda: cmd_schedule(RunConfig.load(args.config), args.n, args.out))
    if args.command == "check":
        return guarded(lambda: cmd_check(RunConfig.load(args.config), args.out, args.horizon))
    return guarded(lambda: cmd_battery(args.n, args.tol, args.seed, args.jobs, args.out))


if __name__ == "__main__":
    sys.exit(main())

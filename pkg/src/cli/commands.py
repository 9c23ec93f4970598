"""Subcommand handlers; each returns the process exit code."""
import csv
import json
from dataclasses import replace
from pathlib import Path

import numpy as np

from src.analysis.fitting import FITTERS
from src.analysis.grad_check import grad_check
from src.harness.checkpoints import default_checkpoints
from src.harness.config import load_config
from src.harness.ensemble import resolve_threads, run_ensemble
from src.harness.storage import load, persist
from src.noise.spec import as_matrix
from src.planner.constants import AssumptionConstants
from src.planner.plans import (
    RatePlan, beta_threshold, ratio_threshold, theorem1_plan, theorem2_plan, theorem3_plan,
)
from src.planner.envelope import solve_rate_state, solve_rate_time
from src.problems.registry import ProblemRegistry
from src.problems.verification import verify_constants
from src.utils.errors import ConfigurationError
from src.utils.log import get_logger
from src.utils.version import describe_version

logger = get_logger("CLI")

EXIT_OK = 0
EXIT_FAILED = 2


def _write_json(out_dir, filename: str, payload: dict) -> Path:
    path = Path(out_dir) / filename
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, indent=2) + "\n")
    logger.info(f"wrote {path}")
    return path


# ============================================================
# plan
# ============================================================

_MODE_FLAGS = {
    "state": {"delta", "gamma", "alpha", "beta", "k0", "V0"},
    "time": {"gamma1", "gamma2", "gamma_prime", "alpha", "beta", "k0", "V0"},
    "quadratic": {"gamma", "omega", "V0"},
}
_ALL_MODE_FLAGS = set().union(*_MODE_FLAGS.values())


def _check_flags(args) -> None:
    foreign = sorted(
        name for name in _ALL_MODE_FLAGS - _MODE_FLAGS[args.mode] if getattr(args, name) is not None
    )
    if foreign:
        flags = ", ".join("--" + name.replace("_", "-") for name in foreign)
        raise ConfigurationError(f"{flags} not applicable to --mode {args.mode}")
    if args.practical and args.mode == "quadratic":
        raise ConfigurationError("--practical applies to polynomial modes only")


def _matrix(values, name: str):
    if values is None:
        return 0.0
    if len(values) == 1:
        return values[0]
    if len(values) == 4:
        return ((values[0], values[1]), (values[2], values[3]))
    raise ConfigurationError(f"--{name} takes 1 or 4 values, got {len(values)}")


def _constants(args) -> AssumptionConstants:
    definition = ProblemRegistry.get(args.problem)
    if definition is None:
        raise ConfigurationError(f"unknown problem {args.problem!r}; known: {', '.join(ProblemRegistry.ids())}")
    base = definition.build().consts.to_dict()
    for name in base:
        override = getattr(args, name, None)
        if override is not None:
            base[name] = override
    return AssumptionConstants.from_dict(base)


def _initial_v0(problem_id: str, consts: AssumptionConstants, ratio: float) -> float:
    problem = ProblemRegistry.build(problem_id)
    x_hat = np.ones(problem.d1) - problem.lambda_map(np.ones(problem.d2))
    y_hat = np.ones(problem.d2) - problem.y_star
    return float(consts.c * ratio * np.dot(x_hat, x_hat) + np.dot(y_hat, y_hat))


def _default_steps(consts: AssumptionConstants, rates) -> tuple:
    """Smallest beta and alpha meeting the theorem thresholds."""
    beta = beta_threshold(rates, consts)
    return ratio_threshold(consts) * beta, beta


def build_plan(args) -> RatePlan:
    _check_flags(args)
    consts = _constants(args)
    strict = not args.practical
    if args.mode == "quadratic":
        gamma = _matrix(args.gamma, "gamma") if args.gamma is not None else 0.1
        omega = args.omega if args.omega is not None else 2.0 * ratio_threshold(consts)
        v0 = args.V0 if args.V0 is not None else _initial_v0(args.problem, consts, 1.0 / omega)
        return theorem2_plan(consts, gamma, omega, args.beta_cap, V0=v0)
    if args.mode == "state":
        delta = _matrix(args.delta, "delta")
        default_alpha, default_beta = _default_steps(consts, solve_rate_state(delta))
    else:
        gamma1 = args.gamma1 if args.gamma1 is not None else 0.0
        gamma2 = args.gamma2 if args.gamma2 is not None else 0.0
        default_alpha, default_beta = _default_steps(consts, solve_rate_time(gamma1, gamma2))
    alpha = args.alpha if args.alpha is not None else default_alpha
    beta = args.beta if args.beta is not None else default_beta
    v0 = args.V0 if args.V0 is not None else _initial_v0(args.problem, consts, beta / alpha)
    if args.mode == "state":
        return theorem1_plan(consts, delta, alpha, beta, v0, gamma=_matrix(args.gamma, "gamma"),
                             k0=args.k0, strict=strict)
    gamma_prime = args.gamma_prime or [0.0]
    if len(gamma_prime) not in (1, 2):
        raise ConfigurationError(f"--gamma-prime takes 1 or 2 values, got {len(gamma_prime)}")
    gamma_prime = tuple(gamma_prime) * (2 // len(gamma_prime))
    return theorem3_plan(consts, gamma1, gamma2, alpha, beta, v0, gamma_prime=gamma_prime,
                         k0=args.k0, strict=strict)


def format_plan(plan: RatePlan) -> str:
    lines = [f"mode: {plan.mode} ({'strict' if plan.strict else 'practical'})"]
    if plan.rates is not None:
        lines.append(f"a = {plan.rates.a:.4f}")
        lines.append(f"t = {plan.rates.t:.4f}")
    if plan.epsilon is not None:
        lines.append(f"beta* = {plan.constants['beta_star']:.6g}")
        lines.append(f"epsilon = {plan.epsilon:.6g}")
    sched = plan.schedule
    lines.append(f"schedule: alpha={sched.alpha:.6g} beta={sched.beta:.6g} a={sched.a:.4f} b={sched.b:g} k0={sched.k0:.6g}")
    lines.append(f"M = {plan.M:.6g}")
    for name, value in plan.constants.items():
        lines.append(f"  {name} = {value:.6g}")
    if plan.feasible:
        lines.append("feasible")
    else:
        lines.append("INFEASIBLE")
        lines.extend(f"  - {violation}" for violation in plan.violations)
    return "\n".join(lines)


def write_bound_csv(plan: RatePlan, path, iterations: int) -> Path:
    ks = default_checkpoints(iterations)
    bound = plan.bound(ks)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(("k", "bound"))
        for k, b in zip(ks, bound):
            writer.writerow((k, format(float(b), ".17g")))
    logger.info(f"wrote {path}")
    return path


def cmd_plan(args) -> int:
    plan = build_plan(args)
    print(format_plan(plan))
    if args.out:
        _write_json(args.out, f"plan_{plan.mode}.json", {**plan.to_dict(), "version": describe_version()})
    if args.bound_csv:
        write_bound_csv(plan, args.bound_csv, args.iterations)
    return EXIT_OK if plan.feasible else EXIT_FAILED


# ============================================================
# run
# ============================================================

def cmd_run(args) -> int:
    config = load_config(args.config).with_overrides(
        master_seed=args.seed, replicates=args.replicates, iterations=args.iterations,
    )
    threads = resolve_threads(args.threads)
    summary = run_ensemble(config, threads=threads)
    summary = replace(summary, version=describe_version())
    out_dir = Path(args.out or "results")
    json_path, csv_path = persist(summary, out_dir / f"{args.name or config.name or 'summary'}.json")
    last = summary.checkpoints[-1]
    print(
        f"{config.name or config.problem}: final mean_V {last.mean_V:.6g} at k={last.k}, "
        f"wall {summary.wall_time_s:.1f}s, diverged {summary.diverged}/{config.replicates} -> {csv_path}"
    )
    return EXIT_OK


# ============================================================
# fit
# ============================================================

def cmd_fit(args) -> int:
    summary = load(args.summary)
    result = FITTERS[args.kind](summary, k_min=args.k_min, k_max=args.k_max)
    payload = {**result.to_dict(), "rate": result.rate, "source": str(args.summary), "version": describe_version()}
    print(json.dumps(payload, indent=2))
    if args.out:
        _write_json(args.out, f"{Path(args.summary).stem}_fit_{args.kind}.json", payload)
    return EXIT_OK


# ============================================================
# verify
# ============================================================

def cmd_verify(args) -> int:
    params = {"dim": args.dim} if args.dim is not None else {}
    problem = ProblemRegistry.build(args.problem, **params)
    box = args.box if args.box is not None else problem.verify_box
    report = verify_constants(problem, box, args.n, args.seed, slack=args.slack, raise_on_failure=False)

    rng = np.random.Generator(np.random.Philox(args.seed + 1))
    points = [
        (rng.uniform(-box, box, problem.d1), rng.uniform(-box, box, problem.d2)) for _ in range(args.points)
    ]
    grads = grad_check(problem, points, args.h)
    grads_ok = grads.max_error <= args.grad_tol

    for check in report.checks:
        print(f"{check.name:<12} constant {check.constant:<8g} empirical {check.worst_ratio:<12.6g} "
              f"{'ok' if check.passed else 'VIOLATED'}")
    for name, err in grads.errors.items():
        print(f"{name:<12} max relative error {err:.3g} {'ok' if err <= args.grad_tol else 'FAILED'}")
    for witness in report.witnesses:
        print(f"witness: {json.dumps(witness)}")

    if args.out:
        _write_json(args.out, f"verify_{problem.name}.json", {
            "constants": report.to_dict(), "gradients": grads.to_dict(), "grad_tol": args.grad_tol,
            "version": describe_version(),
        })
    passed = report.passed and grads_ok
    print("PASS" if passed else "FAIL")
    return EXIT_OK if passed else EXIT_FAILED

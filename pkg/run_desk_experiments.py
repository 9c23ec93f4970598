"""
Rate grids: runs the delta grid, the quadratic case and the gamma grid for
one problem and writes a summary, a CSV and a fit report per curve, plus a
table of predicted against fitted rates.

    python run_desk_experiments.py --problem sgd-pr --scale desk --out results/desk
"""
import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

from src.analysis.fitting import fit_loglog, fit_semilog
from src.harness.config import load_config
from src.harness.ensemble import run_ensemble
from src.harness.storage import persist
from src.noise.spec import NoiseSpec
from src.planner.envelope import solve_rate_state, solve_rate_time
from src.utils.errors import LabError
from src.utils.log import configure_logging, get_logger
from src.utils.version import describe_version

logger = get_logger("DeskExperiments")

CONFIG_DIR = Path(__file__).resolve().parent / "configs"
DELTAS = (0.0, 0.2, 0.4, 0.6, 0.8)
GAMMAS = (0.0, 1.0, 2.0, 3.0, 4.0)
FIT_START = {"desk": 1e5, "full": 1e6}


def _stem(problem: str) -> str:
    return problem.replace("-", "_")


def _run(config, label: str, out_dir: Path, threads):
    config = replace(config, name=label)
    summary = replace(run_ensemble(config, threads=threads), version=describe_version())
    persist(summary, out_dir / f"{label}.json")
    return summary


def state_grid(problem: str, scale: str, out_dir: Path, threads) -> list:
    base = load_config(CONFIG_DIR / f"{_stem(problem)}_state_{scale}.json")
    gamma = base.noise.gamma_mat
    rows = []
    for delta in DELTAS:
        config = replace(base, noise=NoiseSpec.state(delta, gamma))
        summary = _run(config, f"{_stem(problem)}_state_delta{delta:g}_{scale}", out_dir, threads)
        fit = fit_loglog(summary, k_min=FIT_START[scale])
        rows.append({"curve": f"delta={delta:g}", "predicted": solve_rate_state(delta).t, "fit": fit.to_dict()})
    return rows


def quadratic_case(problem: str, scale: str, out_dir: Path, threads) -> list:
    config = load_config(CONFIG_DIR / f"{_stem(problem)}_quadratic_{scale}.json")
    summary = _run(config, f"{_stem(problem)}_quadratic_{scale}", out_dir, threads)
    fit = fit_semilog(summary, k_min=0.0)
    return [{"curve": "delta=1", "predicted": None, "fit": fit.to_dict()}]


def time_grid(problem: str, scale: str, out_dir: Path, threads) -> list:
    base = load_config(CONFIG_DIR / f"{_stem(problem)}_time_{scale}.json")
    p11, p22 = base.noise.gamma_time
    rows = []
    for gamma in GAMMAS:
        config = replace(base, noise=NoiseSpec.time_from_start(gamma, gamma, p11, p22, base.schedule.k0))
        summary = _run(config, f"{_stem(problem)}_time_gamma{gamma:g}_{scale}", out_dir, threads)
        # the highest gamma flattens at machine precision; fit only its first decade
        k_max = 10 * FIT_START[scale] if gamma == GAMMAS[-1] else None
        fit = fit_loglog(summary, k_min=FIT_START[scale], k_max=k_max)
        rows.append({"curve": f"gamma={gamma:g}", "predicted": solve_rate_time(gamma, gamma).t, "fit": fit.to_dict()})
    return rows


GRIDS = {"state": state_grid, "quadratic": quadratic_case, "time": time_grid}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description="Run the convergence-rate grids")
    parser.add_argument("--problem", choices=("sgd-pr", "sbo"), default="sgd-pr")
    parser.add_argument("--scale", choices=("desk", "full"), default="desk")
    parser.add_argument("--only", choices=tuple(GRIDS), action="append", help="restrict to some grids")
    parser.add_argument("--threads", type=int)
    parser.add_argument("--out", default="results")
    args = parser.parse_args(argv)
    configure_logging()

    out_dir = Path(args.out)
    table = []
    try:
        for name in args.only or GRIDS:
            table.extend(GRIDS[name](args.problem, args.scale, out_dir, args.threads))
    except LabError as exc:
        logger.error(str(exc))
        return exc.exit_code

    for row in table:
        predicted = "-" if row["predicted"] is None else f"{row['predicted']:.4f}"
        print(f"{row['curve']:<12} predicted {predicted:<8} fitted {-row['fit']['slope']:.4f}")
    report = out_dir / f"{_stem(args.problem)}_{args.scale}_fits.json"
    report.write_text(json.dumps({"version": describe_version(), "rows": table}, indent=2) + "\n")
    logger.info(f"wrote {report}")
    return 0


if __name__ == "__main__":
    sys.exit(main())

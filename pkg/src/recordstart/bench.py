"""Benchmark harness: seeded experiment fan-out, aggregation, artifacts.

``run_experiment`` executes N independent global runs of one algorithm on
one objective, writes ``history.csv`` (one row per counted oracle call)
and ``summary.json``, and returns the aggregate.  Run ``i`` is seeded by a
stable hash of ``(master_seed, i)``, so results are byte-identical across
invocations and worker counts, and adding runs never perturbs earlier
ones.

CLI::

    bench run --objective zakharov --dim 5 --algo rdmss --runs 50 --seed 17 --out out/
    bench validate-theory --trajectories 100000 --seed 0
    bench compare out_a/summary.json out_b/summary.json
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import math
import os
from dataclasses import dataclass
from multiprocessing import Pool

import numpy as np

from .hasplid import LabConfig, validate_statistics
from .multistart import AlgoParams, HistoryRow, RunReport, check_success, run_dmss, run_rdmss
from .objectives import OBJECTIVE_IDS, Oracle, make, sample_uniform
from .newton_cg import init as ncg_init, step as ncg_step

__all__ = [
    "ExperimentConfig",
    "AggregateReport",
    "derive_seed",
    "run_experiment",
    "emit_history",
    "aggregate_from_history",
    "compare",
    "main",
]

ALGORITHMS = ("dmss", "rdmss", "ncg")
HISTORY_HEADER = ["run_id", "eval_index", "f_value", "is_record", "restart_index", "algorithm"]
DEFAULT_SEED = 52


@dataclass(frozen=True)
class ExperimentConfig:
    objective: str
    dim: int
    algorithm: str
    alpha: float = 0.5
    delta: float = 1e-3
    eps_base: float = 0.01
    ptilde_scale: float = 1.0
    runs: int = 50
    seed: int = DEFAULT_SEED
    workers: int = 1
    max_total_evals: int = 100_000

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"algorithm must be one of {ALGORITHMS}")
        if self.runs < 1:
            raise ValueError("runs must be >= 1")
        if not 0.0 < self.eps_base < 1.0:
            raise ValueError("eps_base must be in (0, 1)")

    @property
    def epsilon(self) -> float:
        return self.eps_base**self.dim

    def algo_params(self) -> AlgoParams:
        return AlgoParams(
            alpha=self.alpha,
            delta=self.delta,
            epsilon=self.epsilon,
            ptilde_scale=self.ptilde_scale,
            max_total_evals=self.max_total_evals,
        )


@dataclass(frozen=True)
class AggregateReport:
    avg_restarts: float
    avg_evals_to_target: float | None
    avg_inner_iterations: float
    avg_total_evals: float
    success_count: int
    runs: int

    def to_dict(self) -> dict:
        return {
            "avg_restarts": self.avg_restarts,
            "avg_evals_to_target": self.avg_evals_to_target,
            "avg_inner_iterations": self.avg_inner_iterations,
            "avg_total_evals": self.avg_total_evals,
            "success_count": self.success_count,
            "runs": self.runs,
        }


def derive_seed(master_seed: int, index: int) -> int:
    """Stable per-run seed: 64-bit blake2b digest of "master:index"."""
    digest = hashlib.blake2b(f"{master_seed}:{index}".encode(), digest_size=8).digest()
    return int.from_bytes(digest, "big")


def _run_bare_ncg(spec, params: AlgoParams, seed) -> RunReport:
    """Baseline: a single descent to native convergence, no restarts."""
    rng = np.random.default_rng(seed)
    x0 = sample_uniform(spec, rng)
    oracle = Oracle(spec)
    engine = ncg_init(spec, x0, oracle)
    history = [HistoryRow(1, engine.fx, True, 1)]
    evals = 1
    best = engine.fx
    while not engine.converged and evals < params.max_total_evals:
        fn = ncg_step(engine)
        if fn is None:
            break
        evals += 1
        is_record = fn < best
        if is_record:
            best = fn
        history.append(HistoryRow(evals, fn, is_record, 1))
    success, first_hit = check_success(history, spec, params.epsilon)
    from .multistart import GlobalState
    from .special import RunStats

    state = GlobalState()
    state.run_stats = [RunStats(records=sum(1 for r in history if r.is_record), iterates=evals)]
    state.restarts = 1
    state.incumbent_y = best
    return RunReport(
        algorithm="ncg",
        restarts=1,
        evals_to_target=first_hit,
        avg_inner_iters=float(evals),
        total_evals=evals,
        line_search_evals=engine.line_search_evals,
        success=success,
        budget_exhausted=evals >= params.max_total_evals,
        history=history,
        state=state,
    )


_DRIVERS = {"dmss": run_dmss, "rdmss": run_rdmss, "ncg": _run_bare_ncg}


def _run_single(job) -> RunReport:
    cfg_fields, index = job
    cfg = ExperimentConfig(**cfg_fields)
    spec = make(cfg.objective, cfg.dim)
    seed = derive_seed(cfg.seed, index)
    return _DRIVERS[cfg.algorithm](spec, cfg.algo_params(), seed)


def run_experiment(config: ExperimentConfig, out_dir: str | None = None):
    """Execute all runs, write artifacts when ``out_dir`` is given, and
    return ``(AggregateReport, list[RunReport])``."""
    cfg_fields = {k: getattr(config, k) for k in config.__dataclass_fields__}
    jobs = [(cfg_fields, i) for i in range(config.runs)]
    if config.workers <= 1:
        reports = [_run_single(j) for j in jobs]
    else:
        with Pool(config.workers) as pool:
            reports = pool.map(_run_single, jobs)
    aggregate = _aggregate(reports)
    if out_dir is not None:
        os.makedirs(out_dir, exist_ok=True)
        emit_history(reports, os.path.join(out_dir, "history.csv"))
        # the worker count must not leak into artifacts: identical configs
        # produce byte-identical files at any parallelism
        summary_cfg = {k: v for k, v in cfg_fields.items() if k != "workers"}
        summary = {"config": summary_cfg, "aggregate": aggregate.to_dict()}
        with open(os.path.join(out_dir, "summary.json"), "w") as fh:
            json.dump(summary, fh, indent=2, sort_keys=True)
            fh.write("\n")
    return aggregate, reports


def _aggregate(reports) -> AggregateReport:
    hits = [r.evals_to_target for r in reports if r.evals_to_target is not None]
    return AggregateReport(
        avg_restarts=float(np.mean([r.restarts for r in reports])),
        avg_evals_to_target=float(np.mean(hits)) if hits else None,
        avg_inner_iterations=float(np.mean([r.avg_inner_iters for r in reports])),
        avg_total_evals=float(np.mean([r.total_evals for r in reports])),
        success_count=sum(1 for r in reports if r.success),
        runs=len(reports),
    )


def emit_history(reports, path: str, sort_values: bool = False) -> None:
    """One CSV row per counted oracle call, chronological within runs.

    With ``sort_values`` the rows of each run are reordered by
    non-increasing objective value and re-indexed by rank, the layout the
    dimension-scaling plots consume.
    """
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(HISTORY_HEADER)
        for run_id, report in enumerate(reports):
            rows = report.history
            if sort_values:
                rows = sorted(rows, key=lambda r: -r.f_value)
            for rank, row in enumerate(rows, start=1):
                writer.writerow(
                    [
                        run_id,
                        rank if sort_values else row.eval_index,
                        repr(row.f_value),
                        int(row.is_record),
                        row.restart_index,
                        report.algorithm,
                    ]
                )


def aggregate_from_history(history_path: str, objective: str, dim: int, eps_base: float) -> AggregateReport:
    """Recompute the aggregate purely from history.csv (consistency
    oracle for summary.json)."""
    spec = make(objective, dim)
    epsilon = eps_base**dim
    runs: dict[int, list] = {}
    with open(history_path, newline="") as fh:
        reader = csv.DictReader(fh)
        for rec in reader:
            runs.setdefault(int(rec["run_id"]), []).append(rec)
    restarts, hits, inner, totals, successes = [], [], [], [], 0
    for run_id in sorted(runs):
        rows = runs[run_id]
        n_restarts = max(int(r["restart_index"]) for r in rows)
        restarts.append(n_restarts)
        totals.append(len(rows))
        per_loop = [0] * n_restarts
        for r in rows:
            per_loop[int(r["restart_index"]) - 1] += 1
        inner.append(float(np.mean(per_loop)))
        hit = None
        for r in rows:
            if abs(float(r["f_value"]) - spec.f_star) <= epsilon:
                hit = int(r["eval_index"])
                break
        if hit is not None:
            successes += 1
            hits.append(hit)
    return AggregateReport(
        avg_restarts=float(np.mean(restarts)),
        avg_evals_to_target=float(np.mean(hits)) if hits else None,
        avg_inner_iterations=float(np.mean(inner)),
        avg_total_evals=float(np.mean(totals)),
        success_count=successes,
        runs=len(runs),
    )


def compare(summary_a_path: str, summary_b_path: str) -> dict:
    """Paired metric deltas (B minus A) with a directional verdict."""
    with open(summary_a_path) as fh:
        a = json.load(fh)
    with open(summary_b_path) as fh:
        b = json.load(fh)
    for key in ("objective", "dim"):
        if a["config"][key] != b["config"][key]:
            raise ValueError(f"summaries disagree on {key}: {a['config'][key]} vs {b['config'][key]}")
    deltas = {}
    for metric, agg_a in a["aggregate"].items():
        agg_b = b["aggregate"][metric]
        if agg_a is None or agg_b is None:
            deltas[metric] = {"a": agg_a, "b": agg_b, "delta": None, "verdict": "incomparable"}
            continue
        delta = agg_b - agg_a
        verdict = "equal" if delta == 0 else ("b_higher" if delta > 0 else "b_lower")
        deltas[metric] = {"a": agg_a, "b": agg_b, "delta": delta, "verdict": verdict}
    return {
        "objective": a["config"]["objective"],
        "dim": a["config"]["dim"],
        "algorithm_a": a["config"]["algorithm"],
        "algorithm_b": b["config"]["algorithm"],
        "metrics": deltas,
    }


# ---------------------------------------------------------------------------
# CLI
# ---------------------------------------------------------------------------


def _cmd_run(args) -> int:
    config = ExperimentConfig(
        objective=args.objective,
        dim=args.dim,
        algorithm=args.algo,
        alpha=args.alpha,
        delta=args.delta,
        eps_base=args.eps_base,
        ptilde_scale=args.ptilde_scale,
        runs=args.runs,
        seed=args.seed,
        workers=args.workers,
    )
    aggregate, _ = run_experiment(config, out_dir=args.out)
    print(json.dumps(aggregate.to_dict(), indent=2, sort_keys=True))
    return 0


def _cmd_validate_theory(args) -> int:
    power_law = validate_statistics(
        LabConfig(alpha=0.5, lam=1.0, trajectories=args.trajectories, seed=args.seed)
    )
    classical = validate_statistics(
        LabConfig(alpha=1.0, lam=1.0, trajectories=args.trajectories, seed=args.seed)
    )
    report = {"power_law": power_law.to_dict(), "classical": classical.to_dict()}
    text = json.dumps(report, indent=2, sort_keys=True)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    print(text)
    ok = power_law.all_passed() and classical.all_passed()
    return 0 if ok else 1


def _cmd_compare(args) -> int:
    result = compare(args.summary_a, args.summary_b)
    text = json.dumps(result, indent=2, sort_keys=True)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    print(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bench", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run one seeded experiment and write artifacts")
    run_p.add_argument("--objective", required=True, choices=OBJECTIVE_IDS)
    run_p.add_argument("--dim", type=int, default=5)
    run_p.add_argument("--algo", required=True, choices=ALGORITHMS)
    run_p.add_argument("--alpha", type=float, default=0.5)
    run_p.add_argument("--delta", type=float, default=1e-3)
    run_p.add_argument("--eps-base", type=float, default=0.01)
    run_p.add_argument("--ptilde-scale", type=float, default=1.0)
    run_p.add_argument("--runs", type=int, default=50)
    run_p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    run_p.add_argument("--workers", type=int, default=os.cpu_count() or 1)
    run_p.add_argument("--out", default=None)
    run_p.set_defaults(func=_cmd_run)

    th_p = sub.add_parser("validate-theory", help="Monte-Carlo checks of the record-value closed forms")
    th_p.add_argument("--trajectories", type=int, default=100_000)
    th_p.add_argument("--seed", type=int, default=0)
    th_p.add_argument("--out", default=None)
    th_p.set_defaults(func=_cmd_validate_theory)

    cmp_p = sub.add_parser("compare", help="paired deltas between two summary.json files")
    cmp_p.add_argument("summary_a")
    cmp_p.add_argument("summary_b")
    cmp_p.add_argument("--out", default=None)
    cmp_p.set_defaults(func=_cmd_compare)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())

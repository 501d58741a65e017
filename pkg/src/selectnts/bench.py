"""Repeated-run benchmarking (AverS, PAR-2) and counter-distribution snapshots.

Report files written by :func:`run_suite` into ``output_dir``:

``runs.csv``
    one row per (instance, run): ``instance, run, seed, stream, solver,
    status, solved, seconds, flips, tries, beta, gamma, error``.
``summary.csv``
    one row per instance: ``instance, runs, solved, success_rate, par2,
    mean_flips``, then a final ``ALL`` row whose ``solved`` column is AverS.
``metadata.json``
    solver, parameters, RNG algorithm, base seed, limits, host info and the
    aggregates.

Runs of an instance that fails to parse are recorded with status ``ERROR``
and count as unsolved.
"""

import csv
import json
import logging
import os
import platform
import time
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .cnf import DimacsError, check_assignment, read_dimacs
from .nts import NtsCounters, infer_preset, solve_selectnts
from .probsat import SolverParams, Status, solve_probsat
from .rng import ALGORITHM, Rng

log = logging.getLogger(__name__)

SOLVERS = {"probsat": solve_probsat, "selectnts": solve_selectnts}


class EmptyOutcomes(ValueError):
    pass


def par2(outcomes, limit):
    """Mean runtime with each unsolved run charged ``2 * limit``.

    ``outcomes`` is a sequence of ``(solved, seconds)``; ``seconds`` is
    ignored for unsolved runs.
    """
    outcomes = list(outcomes)
    if not outcomes:
        raise EmptyOutcomes("par2 needs at least one outcome")
    total = 0.0
    for solved, seconds in outcomes:
        if solved:
            if seconds > limit:
                raise ValueError(f"solved run took {seconds}s, beyond the {limit}s limit")
            total += seconds
        else:
            total += 2.0 * limit
    return total / len(outcomes)


def instance_stream(name):
    """Stable 32-bit stream id for an instance, so seeds differ across instances."""
    return zlib.crc32(Path(name).name.encode("utf-8"))


@dataclass
class BenchConfig:
    instances: list
    solver: str = "selectnts"
    params: SolverParams = field(default_factory=SolverParams)
    preset: bool = False
    runs: int = 10
    time_limit: float | None = None
    flip_limit: int | None = None
    workers: int = 1
    output_dir: str | None = None
    seed: int = 0

    def __post_init__(self):
        if self.runs < 1:
            raise ValueError("runs must be >= 1")
        if self.time_limit is None and self.flip_limit is None:
            raise ValueError("set a time limit, a flip limit, or both")
        if self.solver not in SOLVERS:
            raise ValueError(f"unknown solver {self.solver!r}")
        self.instances = [str(p) for p in self.instances]


@dataclass
class RunRow:
    instance: str
    run: int
    seed: int
    stream: int
    solver: str
    status: str
    solved: bool
    seconds: float
    flips: int
    tries: int
    beta: int | None = None
    gamma: int | None = None
    error: str = ""


@dataclass
class BenchReport:
    config: BenchConfig
    rows: list
    instances: list

    def instance_rows(self, name):
        return [r for r in self.rows if r.instance == name]

    @property
    def avers(self):
        """Mean number of instances solved per run."""
        return sum(r.solved for r in self.rows) / self.config.runs

    @property
    def par2(self):
        if self.config.time_limit is None or not self.rows:
            return None
        return par2([(r.solved, r.seconds) for r in self.rows], self.config.time_limit)

    def summary(self):
        out = []
        limit = self.config.time_limit
        for name in self.instances:
            rows = self.instance_rows(name)
            solved = sum(r.solved for r in rows)
            out.append({
                "instance": name,
                "runs": len(rows),
                "solved": solved,
                "success_rate": solved / len(rows),
                "par2": par2([(r.solved, r.seconds) for r in rows], limit) if limit else None,
                "mean_flips": float(np.mean([r.flips for r in rows])),
            })
        return out

    def format_table(self):
        lines = [f"{'instance':40s} {'solved':>8s} {'par2':>10s}"]
        for s in self.summary():
            p2 = f"{s['par2']:.3f}" if s["par2"] is not None else "-"
            lines.append(f"{Path(s['instance']).name:40s} {s['solved']:>4d}/{s['runs']:<3d} {p2:>10s}")
        p2 = f"{self.par2:.3f}" if self.par2 is not None else "-"
        lines.append(f"{'AverS':40s} {self.avers:>8.2f} {p2:>10s}")
        return "\n".join(lines)

    def write(self, out_dir):
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        with open(out / "runs.csv", "w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=list(RunRow.__dataclass_fields__))
            w.writeheader()
            for r in self.rows:
                w.writerow(asdict(r))
        with open(out / "summary.csv", "w", newline="") as fh:
            fields = ["instance", "runs", "solved", "success_rate", "par2", "mean_flips"]
            w = csv.DictWriter(fh, fieldnames=fields)
            w.writeheader()
            for s in self.summary():
                w.writerow(s)
            w.writerow({"instance": "ALL", "runs": self.config.runs, "solved": self.avers,
                        "success_rate": "", "par2": self.par2, "mean_flips": ""})
        (out / "metadata.json").write_text(json.dumps(self.metadata(), indent=2, default=str))
        (out / "summary.txt").write_text(self.format_table() + "\n")

    def metadata(self):
        cfg = self.config
        return {
            "solver": cfg.solver,
            "params": asdict(cfg.params),
            "preset": cfg.preset,
            "rng_algorithm": ALGORITHM,
            "seed": cfg.seed,
            "seed_rule": "run seed = seed + run index; stream = crc32(instance file name)",
            "runs": cfg.runs,
            "time_limit": cfg.time_limit,
            "flip_limit": cfg.flip_limit,
            "instances": self.instances,
            "host": {
                "platform": platform.platform(),
                "python": platform.python_version(),
                "machine": platform.machine(),
                "cpus": os.cpu_count(),
            },
            "aggregates": {"avers": self.avers, "par2": self.par2},
        }


def _one_run(cfg, name, formula, params, run):
    seed = cfg.seed + run
    stream = instance_stream(name)
    solve = SOLVERS[cfg.solver]
    res = solve(formula, params.replace(seed=seed), Rng(seed, stream),
                time_limit=cfg.time_limit, max_flips=cfg.flip_limit)
    solved = res.status is Status.SATISFIED
    if solved and check_assignment(formula, res.model):
        raise RuntimeError(f"{name} run {run}: model failed verification")
    if solved and cfg.time_limit is not None and res.wall_time > cfg.time_limit:
        solved = False
    return RunRow(name, run, seed, stream, cfg.solver,
                  "SATISFIED" if solved else "UNKNOWN", solved, res.wall_time,
                  res.total_flips, res.tries_used, params.beta, params.gamma)


def run_suite(cfg):
    """Run every instance ``cfg.runs`` times and collect a :class:`BenchReport`."""
    loaded = {}
    jobs = []
    rows = {}
    for name in cfg.instances:
        try:
            formula = read_dimacs(name)
        except (DimacsError, OSError) as exc:
            log.warning("skipping %s: %s", name, exc)
            for run in range(cfg.runs):
                rows[(name, run)] = RunRow(name, run, cfg.seed + run, instance_stream(name),
                                           cfg.solver, "ERROR", False, 0.0, 0, 0,
                                           error=f"{type(exc).__name__}: {exc}")
            continue
        params = cfg.params
        if cfg.preset and cfg.solver == "selectnts":
            beta, gamma = infer_preset(formula, name)
            params = params.replace(beta=beta, gamma=gamma)
        loaded[name] = (formula, params)
        jobs.extend((name, run) for run in range(cfg.runs))

    t0 = time.perf_counter()
    with ThreadPoolExecutor(max_workers=max(cfg.workers, 1)) as pool:
        futures = {
            key: pool.submit(_one_run, cfg, key[0], *loaded[key[0]], key[1]) for key in jobs
        }
        for key, fut in futures.items():
            rows[key] = fut.result()
    log.info("suite finished in %.2fs", time.perf_counter() - t0)

    ordered = [rows[(name, run)] for name in cfg.instances for run in range(cfg.runs)]
    report = BenchReport(cfg, ordered, list(cfg.instances))
    if cfg.output_dir:
        report.write(cfg.output_dir)
    return report


@dataclass
class DistributionSnapshot:
    instance: str
    solver: str
    steps: int
    solved: bool
    cnts: np.ndarray
    vnts: np.ndarray

    @property
    def max_cnts(self):
        return int(self.cnts.max()) if len(self.cnts) else 0

    @property
    def max_vnts(self):
        return int(self.vnts.max()) if len(self.vnts) else 0

    @property
    def mean_cnts(self):
        return float(self.cnts.mean()) if len(self.cnts) else 0.0

    @property
    def mean_vnts(self):
        return float(self.vnts.mean()) if len(self.vnts) else 0.0

    def write_csv(self, path):
        """``kind,id,count`` rows; clause ids are 0-based, variables 1-based."""
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["kind", "id", "count"])
            for c, cnt in enumerate(self.cnts.tolist()):
                w.writerow(["clause", c, cnt])
            for v, cnt in enumerate(self.vnts.tolist(), 1):
                w.writerow(["variable", v, cnt])


def snapshot_distributions(f, solver, params=None, steps=10**5, rng=None, instance=""):
    """Run one try of ``solver`` for ``steps`` steps and capture cNTS/vNTS.

    Stops early if the formula is solved; ``steps`` then records the steps
    actually executed.
    """
    if steps < 1:
        raise ValueError("steps must be >= 1")
    params = (params or SolverParams()).replace(max_tries=1, max_steps=steps)
    ctr = NtsCounters.fresh(f)
    res = SOLVERS[solver](f, params, rng, counters=ctr)
    return DistributionSnapshot(instance, solver, res.total_flips, res.solved,
                                ctr.cnts.copy(), ctr.vnts.copy())


def read_snapshot_csv(path):
    cnts, vnts = [], []
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            (cnts if row["kind"] == "clause" else vnts).append(int(row["count"]))
    return np.array(cnts, dtype=np.int64), np.array(vnts, dtype=np.int64)

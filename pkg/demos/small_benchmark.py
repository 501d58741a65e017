"""A desk-scale version of the repeated-run protocol: AverS and PAR-2.

On these uniform 5-SAT instances ProbSAT usually comes out ahead; rerun
with ``SolverParams(cc_enabled=False)`` for SelectNTS to see how much of
the gap is the repeated-variable substitution.
"""

import tempfile
from pathlib import Path

from selectnts import BenchConfig, GenSpec, SolverParams, generate_dimacs, run_suite

tmp = Path(tempfile.mkdtemp(prefix="selectnts-bench-"))
for seed in range(6):
    spec = GenSpec(n=400, k=5, ratio=20.0, seed=seed)
    (tmp / f"unif-k5-r20.0-v400-s{seed}.cnf").write_bytes(generate_dimacs(spec))

names = sorted(str(p) for p in tmp.glob("*.cnf"))
for solver in ("probsat", "selectnts"):
    cfg = BenchConfig(names, solver=solver, params=SolverParams(max_steps=10**7),
                      preset=True, runs=5, time_limit=5.0, workers=4,
                      output_dir=str(tmp / solver))
    rep = run_suite(cfg)
    print(f"== {solver}")
    print(rep.format_table())

print("reports in", tmp)

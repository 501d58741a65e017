"""Generate a random 5-SAT instance, solve it with both engines, check the models."""

import numpy as np

from selectnts import GenSpec, Rng, SolverParams, check_assignment, gen_uniform_ksat
from selectnts import solve_probsat, solve_selectnts

# below the 5-SAT threshold so the instance is very likely satisfiable
f = gen_uniform_ksat(GenSpec(n=300, k=5, ratio=19.0, seed=42))
print(f"instance: n={f.n} m={f.m} ratio={f.ratio:.3f}")

params = SolverParams(max_tries=10, max_steps=10**6, beta=700, gamma=600)

for name, solve in [("probsat", solve_probsat), ("selectnts", solve_selectnts)]:
    res = solve(f, params, Rng(7))
    print(f"{name:10s} {res.status.value:10s} flips={res.total_flips:>8d} "
          f"tries={res.tries_used} time={res.wall_time:.3f}s")
    if res.solved:
        assert check_assignment(f, res.model) == []
        print("           model true count:", int(np.sum(res.model)))

# same seed, same flips
a = solve_selectnts(f, params, Rng(7), trace_len=50)
b = solve_selectnts(f, params, Rng(7), trace_len=50)
print("first flips:", a.extra["trace"][:12].tolist())
print("reproducible:", np.array_equal(a.extra["trace"], b.extra["trace"]))

"""How concentrated do clause and variable selections get?

Runs ProbSAT and SelectNTS for 10^5 steps on a threshold 5-SAT instance with
the same seeds, then compares the largest cNTS (clause selection count) and
vNTS (variable selection count) values. SelectNTS should spread its
selections more evenly.
"""

import sys

import numpy as np

from selectnts import GenSpec, Rng, SolverParams, gen_uniform_ksat, snapshot_distributions
from selectnts.nts import default_params_for

seeds = int(sys.argv[1]) if len(sys.argv) > 1 else 5

f = gen_uniform_ksat(GenSpec(n=540, k=5, ratio=21.117, seed=2017))
beta, gamma = default_params_for("uniform-5", ratio=f.ratio)
params = SolverParams(beta=beta, gamma=gamma)
print(f"n={f.n} m={f.m}  beta={beta} gamma={gamma}")
print(f"{'seed':>4s} {'ps max cnts':>12s} {'nts max cnts':>13s} {'ps max vnts':>12s} {'nts max vnts':>13s}")

rc, rv = [], []
for seed in range(seeds):
    ps = snapshot_distributions(f, "probsat", params, steps=10**5, rng=Rng(seed))
    nt = snapshot_distributions(f, "selectnts", params, steps=10**5, rng=Rng(seed))
    print(f"{seed:>4d} {ps.max_cnts:>12d} {nt.max_cnts:>13d} {ps.max_vnts:>12d} {nt.max_vnts:>13d}")
    rc.append(nt.max_cnts / ps.max_cnts)
    rv.append(nt.max_vnts / ps.max_vnts)

print(f"mean ratio SelectNTS/ProbSAT: cnts {np.mean(rc):.2f}  vnts {np.mean(rv):.2f}")

# histogram of the last snapshot, coarse text version
hist, edges = np.histogram(nt.cnts, bins=8)
for h, lo, hi in zip(hist, edges[:-1], edges[1:]):
    print(f"  cnts {lo:7.0f}-{hi:7.0f} {'#' * int(60 * h / hist.max())}")

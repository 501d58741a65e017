"""Command-line front end: ``selectnts {solve,generate,bench,diagnose}``.

``solve`` follows the SAT-competition convention: it prints ``s SATISFIABLE``
plus a ``v`` line and exits 10, or prints ``s UNKNOWN`` and exits 0. Any
error exits 1. Stdout depends only on the flags (timings go to stderr), so a
fixed ``--seed`` reproduces the output byte for byte.
"""

import argparse
import logging
import sys
import warnings
from pathlib import Path

from .bench import BenchConfig, run_suite, snapshot_distributions
from .cnf import DimacsError, format_solution, read_dimacs, write_dimacs
from .instances import GenSpec, InvalidSpec, certify_satisfiable, gen_uniform_ksat
from .nts import default_params_for, infer_family, solve_selectnts
from .probsat import EXP_CB, POLY_CB, ProbShape, SolverParams, solve_probsat
from .rng import ALGORITHM, Rng

EXIT_SAT = 10
EXIT_UNKNOWN = 0
EXIT_ERROR = 1


def _add_search_flags(p):
    p.add_argument("--max-tries", type=int, default=10, help="restarts per run")
    p.add_argument("--max-steps", type=int, default=10**6, help="flips per try")
    p.add_argument("--beta", type=int, default=None,
                   help="HSC threshold; default: preset for the instance family")
    p.add_argument("--gamma", type=int, default=None,
                   help="vNTS divisor in S_v; default: preset for the instance family")
    p.add_argument("--shape", choices=["auto", "poly", "exp"], default="auto",
                   help="probability shape; auto = poly for k<=3, exp otherwise")
    p.add_argument("--cb", type=float, default=None,
                   help="cb constant; default: 2.06 poly, 3.0/3.7/5.0/5.4 exp for k=4/5/6/>=7")
    p.add_argument("--seed", type=int, default=0, help="RNG seed")
    p.add_argument("--family", choices=["hrs", "uniform"], default=None,
                   help="instance family for presets; default: inferred from file name/formula")
    p.add_argument("--regime", choices=["medium", "huge"], default=None,
                   help="uniform-k preset row; default: inferred from the ratio")
    p.add_argument("--no-cc", action="store_true", help="disable the repeated-variable substitution")
    p.add_argument("--reset-counters", action="store_true",
                   help="reset cNTS/vNTS at every try (otherwise they persist)")


def _shape(args, k=None):
    """ProbShape from --shape/--cb; None means per-formula default."""
    if args.shape == "auto":
        if args.cb is None:
            return None
        if k is None:
            raise ValueError("--cb without --shape needs a known clause length; add --shape")
        kind = ProbShape.default_for(k).kind
    else:
        kind = "polynomial" if args.shape == "poly" else "exponential"
    if args.cb is not None:
        return ProbShape(kind, args.cb)
    if kind == "polynomial":
        return ProbShape(kind, POLY_CB)
    if k is None:
        raise ValueError("--shape exp without --cb needs a known clause length; add --cb")
    return ProbShape(kind, EXP_CB[min(max(k, 4), 7)])


def _params(args, f, name, solver):
    beta, gamma = args.beta, args.gamma
    if solver == "selectnts" and (beta is None or gamma is None):
        family, k, ratio = infer_family(f, name)
        pb, pg = default_params_for(args.family or family, ratio=ratio, n=f.n,
                                    regime=args.regime, k=k)
        beta = pb if beta is None else beta
        gamma = pg if gamma is None else gamma
    return SolverParams(
        max_tries=args.max_tries,
        max_steps=args.max_steps,
        shape=_shape(args, f.max_clause_len),
        beta=beta if beta is not None else 700,
        gamma=gamma if gamma is not None else 600,
        seed=args.seed,
        cc_enabled=not args.no_cc,
        reset_counters=args.reset_counters,
    )


def cmd_solve(args):
    f = read_dimacs(args.instance)
    params = _params(args, f, args.instance, args.solver)
    solve = solve_selectnts if args.solver == "selectnts" else solve_probsat
    shape = params.resolved_shape(f)
    print(f"c solver {args.solver} seed {params.seed} rng {ALGORITHM}")
    print(f"c n {f.n} m {f.m} shape {shape.kind} cb {shape.cb}"
          + (f" beta {params.beta} gamma {params.gamma}" if args.solver == "selectnts" else ""))
    res = solve(f, params, Rng(params.seed), time_limit=args.time_limit)
    print(f"c flips {res.total_flips} tries {res.tries_used}")
    print(f"c time {res.wall_time:.3f}s", file=sys.stderr)
    sys.stdout.write(format_solution(res.model if res.solved else None))
    return EXIT_SAT if res.solved else EXIT_UNKNOWN


def cmd_generate(args):
    spec = GenSpec(args.n, args.k, ratio=args.ratio, m=args.m, seed=args.seed)
    f = gen_uniform_ksat(spec)
    comments = spec.comments()
    if args.certify:
        comments.append(f"certified: {certify_satisfiable(f).value}")
    data = write_dimacs(f, comments=comments)
    if args.output:
        Path(args.output).write_bytes(data)
        print(f"wrote {args.output}: n={f.n} m={f.m} seed={spec.seed}", file=sys.stderr)
    else:
        sys.stdout.buffer.write(data)
    return 0


def _collect(paths):
    out = []
    for p in map(Path, paths):
        if p.is_dir():
            out.extend(sorted(str(q) for q in p.iterdir() if q.suffix in (".cnf", ".dimacs")))
        else:
            out.append(str(p))
    return out


def cmd_bench(args):
    instances = _collect(args.instances)
    if not instances:
        raise ValueError("no instances found")
    params = SolverParams(
        max_tries=args.max_tries,
        max_steps=args.max_steps,
        beta=args.beta if args.beta is not None else 700,
        gamma=args.gamma if args.gamma is not None else 600,
        cc_enabled=not args.no_cc,
        reset_counters=args.reset_counters,
        shape=_shape(args),
    )
    cfg = BenchConfig(
        instances=instances,
        solver=args.solver,
        params=params,
        preset=args.solver == "selectnts" and (args.beta is None or args.gamma is None),
        runs=args.runs,
        time_limit=args.time_limit,
        flip_limit=args.flip_limit,
        workers=args.workers,
        output_dir=args.out,
        seed=args.seed,
    )
    report = run_suite(cfg)
    print(report.format_table())
    return 0


def cmd_diagnose(args):
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    solvers = ["probsat", "selectnts"] if args.solver == "both" else [args.solver]
    print("instance,solver,steps,solved,max_cnts,mean_cnts,max_vnts,mean_vnts")
    for name in _collect(args.instances):
        f = read_dimacs(name)
        for solver in solvers:
            params = _params(args, f, name, solver)
            snap = snapshot_distributions(f, solver, params, steps=args.steps,
                                          rng=Rng(args.seed), instance=name)
            snap.write_csv(out / f"{Path(name).stem}.{solver}.csv")
            print(f"{Path(name).name},{solver},{snap.steps},{int(snap.solved)},"
                  f"{snap.max_cnts},{snap.mean_cnts:.4f},{snap.max_vnts},{snap.mean_vnts:.4f}")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="selectnts",
        description="SelectNTS / ProbSAT local search for SAT",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    fmt = argparse.ArgumentDefaultsHelpFormatter

    p = sub.add_parser("solve", help="solve one DIMACS instance", formatter_class=fmt)
    p.add_argument("instance", help="DIMACS CNF file")
    p.add_argument("--solver", choices=["probsat", "selectnts"], default="selectnts", help="engine")
    p.add_argument("--time-limit", type=float, default=None, help="wall-clock seconds")
    _add_search_flags(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("generate", formatter_class=fmt,
                       help="write a uniform random k-SAT instance")
    p.add_argument("--n", type=int, required=True, help="variables")
    p.add_argument("--k", type=int, required=True, help="literals per clause")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--ratio", type=float, help="clauses per variable; m = round-half-up(ratio*n)")
    g.add_argument("--m", type=int, help="explicit clause count")
    p.add_argument("--seed", type=int, default=0, help="generator seed")
    p.add_argument("--certify", action="store_true", help="record an exact verdict (n <= 64)")
    p.add_argument("-o", "--output", default=None, help="output path; stdout when omitted")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("bench", formatter_class=fmt,
                       help="repeated runs with AverS / PAR-2 reporting")
    p.add_argument("instances", nargs="+", help="DIMACS files or directories of *.cnf")
    p.add_argument("--solver", choices=["probsat", "selectnts"], default="selectnts", help="engine")
    p.add_argument("--runs", type=int, default=10, help="runs per instance")
    p.add_argument("--time-limit", type=float, default=None, help="wall-clock seconds per run")
    p.add_argument("--flip-limit", type=int, default=None, help="total flips per run")
    p.add_argument("--workers", type=int, default=1, help="parallel runs")
    p.add_argument("--out", default=None, help="report directory")
    _add_search_flags(p)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("diagnose", formatter_class=fmt,
                       help="dump cNTS/vNTS distributions after a fixed step count")
    p.add_argument("instances", nargs="+", help="DIMACS files or directories of *.cnf")
    p.add_argument("--solver", choices=["probsat", "selectnts", "both"], default="both",
                   help="engine(s) to snapshot")
    p.add_argument("--steps", type=int, default=10**5, help="steps per snapshot")
    p.add_argument("--out", required=True, help="directory for <instance>.<solver>.csv")
    _add_search_flags(p)
    p.set_defaults(func=cmd_diagnose)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    warnings.simplefilter("default")
    try:
        return args.func(args)
    except (DimacsError, InvalidSpec, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())

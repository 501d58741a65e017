"""SelectNTS and ProbSAT stochastic local search for SAT.

Quick start::

    from selectnts import GenSpec, gen_uniform_ksat, solve_selectnts, SolverParams
    f = gen_uniform_ksat(GenSpec(n=200, k=5, ratio=20.0, seed=1))
    result = solve_selectnts(f, SolverParams(beta=700, gamma=600, seed=7))
"""

from .bench import (
    BenchConfig,
    BenchReport,
    DistributionSnapshot,
    EmptyOutcomes,
    par2,
    run_suite,
    snapshot_distributions,
)
from .cnf import (
    DimacsError,
    EmptyClause,
    Formula,
    HeaderClauseCountMismatch,
    Literal,
    MalformedToken,
    MissingHeader,
    VariableOutOfRange,
    check_assignment,
    format_solution,
    parse_dimacs,
    read_dimacs,
    write_dimacs,
)
from .instances import (
    GenSpec,
    InvalidSpec,
    TooLarge,
    Verdict,
    certify_satisfiable,
    gen_uniform_ksat,
    generate_dimacs,
)
from .nts import (
    NtsCounters,
    SelectNtsSearch,
    cc_filter,
    default_params_for,
    pick_clause,
    s_v,
    solve_selectnts,
    update_cnts,
    update_vnts,
)
from .probsat import (
    ProbSatSearch,
    ProbShape,
    RunResult,
    SolverParams,
    Status,
    prob_value,
    sample_variable,
    solve_probsat,
)
from .rng import Rng
from .state import SearchState, break_of, flip, init_state, make_of, random_assignment, score_of

__version__ = "0.1.0"

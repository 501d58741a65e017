"""Probability-selecting local search (the ProbSAT baseline).

Each step picks an unsatisfied clause uniformly and flips one of its
variables with probability proportional to ``f(break)``, where ``f`` is
either the polynomial ``(0.9 + break) ** -cb`` or the exponential
``cb ** -break`` shape.
"""

import enum
import time
from dataclasses import dataclass, field, replace

import numpy as np
from numba import njit

from .cnf import check_assignment
from .rng import Rng, next_double, randbelow
from .state import _break, _flip, break_of, init_state, random_assignment, reinit_state

# cb defaults from the ProbSAT literature, keyed by clause length
POLY_CB = 2.06
EXP_CB = {4: 3.0, 5: 3.7, 6: 5.0, 7: 5.4}

# wall-clock limits are checked between chunks of this many steps
CHECK_INTERVAL = 1 << 12


class Status(enum.Enum):
    SATISFIED = "SATISFIED"
    UNKNOWN = "UNKNOWN"


@dataclass(frozen=True)
class ProbShape:
    kind: str = "polynomial"
    cb: float = POLY_CB

    def __post_init__(self):
        if self.kind == "polynomial":
            if not self.cb >= 0:
                raise ValueError("polynomial shape needs cb >= 0")
        elif self.kind == "exponential":
            if not self.cb > 0:
                raise ValueError("exponential shape needs cb > 0")
        else:
            raise ValueError(f"unknown shape kind {self.kind!r}")

    @classmethod
    def default_for(cls, k):
        """Polynomial for clause length <= 3, exponential above."""
        if k <= 3:
            return cls("polynomial", POLY_CB)
        return cls("exponential", EXP_CB[min(k, 7)])

    def table(self, max_break):
        return np.array([prob_value(b, self) for b in range(max_break + 1)], dtype=np.float64)


def prob_value(brk, shape):
    if brk < 0:
        raise ValueError("break must be non-negative")
    if shape.kind == "polynomial":
        return (0.9 + brk) ** -shape.cb
    return shape.cb ** -float(brk)


@dataclass(frozen=True)
class SolverParams:
    """Budget and heuristic settings for both engines.

    ``beta``/``gamma`` and the last three switches only affect SelectNTS.
    ``shape=None`` picks the default shape from the formula's longest clause.
    """

    max_tries: int = 10
    max_steps: int = 10**6
    shape: ProbShape | None = None
    beta: int = 700
    gamma: int = 600
    seed: int = 0
    cc_enabled: bool = True
    reset_counters: bool = False
    tie_break: str = "random"

    def __post_init__(self):
        if self.max_tries < 1 or self.max_steps < 1:
            raise ValueError("max_tries and max_steps must be >= 1")
        if self.beta < 1 or self.gamma < 1:
            raise ValueError("beta and gamma must be >= 1")
        if self.tie_break not in ("random", "lowest"):
            raise ValueError("tie_break must be 'random' or 'lowest'")

    def resolved_shape(self, f):
        return self.shape if self.shape is not None else ProbShape.default_for(f.max_clause_len)

    def replace(self, **changes):
        return replace(self, **changes)


@dataclass
class RunResult:
    status: Status
    model: np.ndarray | None
    total_flips: int
    tries_used: int
    wall_time: float
    solver: str = ""
    extra: dict = field(default_factory=dict)

    @property
    def solved(self):
        return self.status is Status.SATISFIED


@njit(cache=True, nogil=True)
def _sample_in_clause(lits, starts, occ, occ_starts, taut, assign, tc, table, st, c, wbuf):
    """Index (within clause ``c``) of a variable drawn with weight table[break]."""
    s0 = starts[c]
    k = starts[c + 1] - s0
    total = 0.0
    for i in range(k):
        w = table[_break(occ, occ_starts, taut, assign, tc, lits[s0 + i] >> 1)]
        wbuf[i] = w
        total += w
    r = next_double(st) * total
    acc = 0.0
    for i in range(k):
        acc += wbuf[i]
        if r < acc:
            return i
    return k - 1


@njit(cache=True, nogil=True)
def _probsat_steps(lits, starts, occ, occ_starts, taut, assign, tc, unsat, upos, meta,
                   table, cnts, vnts, st, budget, trace, tpos, wbuf):
    steps = 0
    while steps < budget:
        if meta[0] == 0:
            return True, steps
        c = unsat[randbelow(st, meta[0])]
        cnts[c] += 1
        i = _sample_in_clause(lits, starts, occ, occ_starts, taut, assign, tc, table, st, c, wbuf)
        v = lits[starts[c] + i] >> 1
        vnts[v] += 1
        _flip(occ, occ_starts, assign, tc, unsat, upos, meta, v)
        if tpos[0] < trace.shape[0]:
            trace[tpos[0]] = v + 1
            tpos[0] += 1
        steps += 1
    return False, steps


def _weight_table(f, shape):
    longest_occ = int(np.diff(f.occ_starts).max()) if f.n else 0
    return shape.table(longest_occ)


def sample_variable(s, f, c, shape, rng):
    """Draw a variable (1-based) of clause ``c`` with probability f(break) / sum."""
    if f.starts[c + 1] == f.starts[c]:
        raise ValueError("clause is empty")
    table = _weight_table(f, shape)
    wbuf = np.empty(f.max_clause_len, dtype=np.float64)
    i = _sample_in_clause(f.lits, f.starts, f.occ, f.occ_starts, f.taut, s.assignment,
                          s.true_count, table, rng.state, c, wbuf)
    return int(f.lits[f.starts[c] + i] >> 1) + 1


def variable_probabilities(s, f, c, shape):
    """Selection probability of each variable of clause ``c``, keyed 1-based."""
    vars_ = f.clause_variables(c)
    w = np.array([prob_value(break_of(s, f, v), shape) for v in vars_])
    return dict(zip(vars_, w / w.sum()))


class ProbSatSearch:
    """Resumable ProbSAT run over one formula.

    ``counters`` (an :class:`~selectnts.nts.NtsCounters`) records clause and
    variable selection counts; ProbSAT never reads them. ``trace_len`` keeps
    the first flipped variables for trace comparisons.
    """

    name = "probsat"

    def __init__(self, f, params=None, rng=None, counters=None, trace_len=0):
        from .nts import NtsCounters

        self.f = f
        self.params = params or SolverParams()
        self.rng = rng if rng is not None else Rng(self.params.seed)
        self.shape = self.params.resolved_shape(f)
        self.table = _weight_table(f, self.shape)
        self.counters = counters if counters is not None else NtsCounters.fresh(f)
        self.trace = np.zeros(trace_len, dtype=np.int32)
        self.tpos = np.zeros(1, dtype=np.int64)
        self.wbuf = np.empty(max(f.max_clause_len, 1), dtype=np.float64)
        self.state = None
        self.tries = 0
        self.total_flips = 0

    @property
    def flip_trace(self):
        return self.trace[: self.tpos[0]].copy()

    def new_try(self):
        self.tries += 1
        if self.f.n:
            a = random_assignment(self.f.n, self.rng)
        else:
            a = np.zeros(0, dtype=np.bool_)
        if self.state is None:
            self.state = init_state(self.f, a)
        else:
            self.state.assignment[:] = a
            reinit_state(self.f, self.state)

    def run(self, budget):
        """Up to ``budget`` steps; returns ``(satisfied, steps_done)``."""
        f, s, ctr = self.f, self.state, self.counters
        sat, done = _probsat_steps(
            f.lits, f.starts, f.occ, f.occ_starts, f.taut, s.assignment, s.true_count,
            s.unsat_list, s.unsat_pos, s.meta, self.table, ctr.cnts, ctr.vnts,
            self.rng.state, budget, self.trace, self.tpos, self.wbuf,
        )
        ctr.meta[1] += done
        self.total_flips += done
        return bool(sat), int(done)

    def solve(self, time_limit=None, max_flips=None):
        p = self.params
        t0 = time.perf_counter()
        chunk = CHECK_INTERVAL if time_limit is not None else p.max_steps
        status = Status.UNKNOWN
        for _ in range(p.max_tries):
            self.new_try()
            remaining = p.max_steps
            stop = False
            while remaining > 0:
                budget = min(remaining, chunk)
                if max_flips is not None:
                    budget = min(budget, max_flips - self.total_flips)
                    if budget <= 0:
                        stop = True
                        break
                sat, done = self.run(budget)
                remaining -= done
                if sat:
                    status = Status.SATISFIED
                    break
                if time_limit is not None and time.perf_counter() - t0 >= time_limit:
                    stop = True
                    break
            if status is Status.SATISFIED or stop:
                break
        elapsed = time.perf_counter() - t0
        model = None
        if status is Status.SATISFIED:
            model = self.state.assignment.copy()
            if check_assignment(self.f, model):
                raise RuntimeError(f"{self.name}: claimed model fails verification")
        return RunResult(status, model, self.total_flips, self.tries, elapsed, self.name)


def solve_probsat(f, p=None, rng=None, time_limit=None, max_flips=None, counters=None,
                  trace_len=0):
    """Run ProbSAT; returns a :class:`RunResult` (never raises on timeout)."""
    search = ProbSatSearch(f, p, rng, counters=counters, trace_len=trace_len)
    result = search.solve(time_limit=time_limit, max_flips=max_flips)
    result.extra["trace"] = search.flip_trace
    return result

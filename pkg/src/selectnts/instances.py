"""Uniform random k-SAT generation and exact satisfiability certification.

Each generated clause has ``k`` distinct variables drawn uniformly without
replacement and fair-coin polarities. Duplicate clauses are allowed. The
clause count for a given ratio is ``round_half_up(ratio * n)``, computed in
decimal arithmetic so that e.g. ``21.117 * 100`` rounds to 2112.
"""

import enum
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from typing import NamedTuple

import numpy as np
from numba import njit

from .cnf import Formula, check_assignment, write_dimacs

TRUTH_TABLE_MAX_N = 20
BACKTRACK_MAX_N = 64


class InvalidSpec(ValueError):
    pass


class TooLarge(ValueError):
    pass


class Verdict(enum.Enum):
    SATISFIABLE = "SATISFIABLE"
    UNSATISFIABLE = "UNSATISFIABLE"


def clause_count(ratio, n):
    return int((Decimal(str(ratio)) * n).quantize(Decimal(1), rounding=ROUND_HALF_UP))


@dataclass(frozen=True)
class GenSpec:
    n: int
    k: int
    ratio: float | None = None
    m: int | None = None
    seed: int = 0
    certify: bool = False

    def __post_init__(self):
        if self.n < 1:
            raise InvalidSpec("n must be >= 1")
        if self.k < 2:
            raise InvalidSpec("k must be >= 2")
        if self.k > self.n:
            raise InvalidSpec(f"k={self.k} exceeds n={self.n}")
        if (self.ratio is None) == (self.m is None):
            raise InvalidSpec("give exactly one of ratio and m")
        if self.ratio is not None and not self.ratio > 0:
            raise InvalidSpec("ratio must be > 0")
        if self.m is not None and self.m < 0:
            raise InvalidSpec("m must be >= 0")

    @property
    def num_clauses(self):
        return self.m if self.m is not None else clause_count(self.ratio, self.n)

    def comments(self):
        lines = [f"generator: uniform-ksat n={self.n} k={self.k} m={self.num_clauses} seed={self.seed}"]
        if self.ratio is not None:
            lines.append(f"ratio: {self.ratio} (m = round-half-up(ratio * n))")
        return lines


def _distinct_rows(gen, n, k, m):
    """m rows of k distinct values in 0..n-1."""
    # acceptance probability of one plain draw of k values
    p_distinct = np.prod((n - np.arange(k)) / n)
    if p_distinct < 0.1:
        return np.argsort(gen.random((m, n)), axis=1)[:, :k]
    rows = gen.integers(0, n, size=(m, k))
    while True:
        srt = np.sort(rows, axis=1)
        bad = np.flatnonzero((srt[:, 1:] == srt[:, :-1]).any(axis=1))
        if not len(bad):
            return rows
        rows[bad] = gen.integers(0, n, size=(len(bad), k))


def gen_uniform_ksat(spec):
    """Formula drawn from the uniform random k-SAT model; pure in ``spec``."""
    gen = np.random.Generator(np.random.PCG64(spec.seed))
    m = spec.num_clauses
    var = _distinct_rows(gen, spec.n, spec.k, m) + 1
    neg = gen.integers(0, 2, size=(m, spec.k)).astype(bool)
    flat = np.where(neg, -var, var).reshape(-1)
    return Formula._from_dimacs_flat(spec.n, flat, np.full(m, spec.k, dtype=np.int64))


def generate_dimacs(spec):
    return write_dimacs(gen_uniform_ksat(spec), comments=spec.comments())


class GeneratedInstance(NamedTuple):
    formula: Formula
    verdict: Verdict | None


def generate_instance(spec):
    f = gen_uniform_ksat(spec)
    return GeneratedInstance(f, certify_satisfiable(f) if spec.certify else None)


def _truth_table(f, chunk_bits=16):
    n = f.n
    if f.m == 0:
        return np.zeros(n, dtype=bool)
    var = f.lits >> 1
    neg = (f.lits & 1).astype(bool)
    total = 1 << n
    step = 1 << min(chunk_bits, n)
    shifts = np.arange(n, dtype=np.int64)
    for base in range(0, total, step):
        idx = np.arange(base, base + step, dtype=np.int64)
        bits = ((idx[:, None] >> shifts) & 1).astype(bool)
        vals = bits[:, var] != neg
        sat = np.logical_or.reduceat(vals, f.starts[:-1], axis=1).all(axis=1)
        hit = np.flatnonzero(sat)
        if len(hit):
            return bits[hit[0]].copy()
    return None


@njit(cache=True)
def _dpll(n, lits, starts, occ, occ_starts, model):
    """Chronological DPLL: counter-based unit propagation, Jeroslow-Wang branching."""
    m = starts.shape[0] - 1
    clen = starts[1:] - starts[:-1]
    nsat = np.zeros(m, dtype=np.int64)
    nfalse = np.zeros(m, dtype=np.int64)
    val = np.full(n, -1, dtype=np.int8)
    trail = np.empty(n, dtype=np.int64)
    tlen = 0
    qhead = 0
    lev_start = np.empty(n + 1, dtype=np.int64)
    lev_lit = np.empty(n + 1, dtype=np.int64)
    lev_flipped = np.zeros(n + 1, dtype=np.bool_)
    nlev = 0
    jw = np.zeros(2 * n, dtype=np.float64)
    while True:
        conflict = False
        while qhead < tlen and not conflict:
            lit = trail[qhead]
            qhead += 1
            for j in range(occ_starts[lit], occ_starts[lit + 1]):
                nsat[occ[j]] += 1
            neg = lit ^ 1
            for j in range(occ_starts[neg], occ_starts[neg + 1]):
                c = occ[j]
                nfalse[c] += 1
                if nsat[c] > 0 or conflict:
                    continue
                if nfalse[c] == clen[c]:
                    conflict = True
                elif nfalse[c] == clen[c] - 1:
                    for q in range(starts[c], starts[c + 1]):
                        u = lits[q]
                        if val[u >> 1] < 0:
                            val[u >> 1] = 1 - (u & 1)
                            trail[tlen] = u
                            tlen += 1
                            break
        if conflict:
            resumed = False
            while nlev > 0:
                nlev -= 1
                while tlen > lev_start[nlev]:
                    tlen -= 1
                    lit = trail[tlen]
                    if tlen < qhead:
                        for j in range(occ_starts[lit], occ_starts[lit + 1]):
                            nsat[occ[j]] -= 1
                        neg = lit ^ 1
                        for j in range(occ_starts[neg], occ_starts[neg + 1]):
                            nfalse[occ[j]] -= 1
                    val[lit >> 1] = -1
                qhead = tlen
                if not lev_flipped[nlev]:
                    lit = lev_lit[nlev] ^ 1
                    lev_lit[nlev] = lit
                    lev_flipped[nlev] = True
                    val[lit >> 1] = 1 - (lit & 1)
                    trail[tlen] = lit
                    tlen += 1
                    nlev += 1
                    resumed = True
                    break
            if not resumed:
                return False
            continue
        jw[:] = 0.0
        open_clauses = False
        for c in range(m):
            if nsat[c] > 0:
                continue
            open_clauses = True
            w = 2.0 ** -(clen[c] - nfalse[c])
            for q in range(starts[c], starts[c + 1]):
                u = lits[q]
                if val[u >> 1] < 0:
                    jw[u] += w
        if not open_clauses:
            for i in range(n):
                model[i] = val[i] == 1
            return True
        best = -1.0
        branch_lit = -1
        for v in range(n):
            if val[v] >= 0:
                continue
            sc = jw[2 * v] + jw[2 * v + 1]
            if sc > best:
                best = sc
                branch_lit = 2 * v if jw[2 * v] >= jw[2 * v + 1] else 2 * v + 1
        lev_start[nlev] = tlen
        lev_lit[nlev] = branch_lit
        lev_flipped[nlev] = False
        val[branch_lit >> 1] = 1 - (branch_lit & 1)
        trail[tlen] = branch_lit
        tlen += 1
        nlev += 1


def _backtrack(f):
    model = np.zeros(f.n, dtype=np.bool_)
    return model if _dpll(f.n, f.lits, f.starts, f.occ, f.occ_starts, model) else None


def find_model(f, method="auto"):
    """A satisfying assignment by complete search, or None if unsatisfiable."""
    if method == "auto":
        method = "truth_table" if f.n <= TRUTH_TABLE_MAX_N else "backtrack"
    if method == "truth_table":
        if f.n > TRUTH_TABLE_MAX_N:
            raise TooLarge(f"truth table limited to n <= {TRUTH_TABLE_MAX_N}, got {f.n}")
        model = _truth_table(f)
    elif method == "backtrack":
        if f.n > BACKTRACK_MAX_N:
            raise TooLarge(f"backtracking limited to n <= {BACKTRACK_MAX_N}, got {f.n}")
        model = _backtrack(f)
    else:
        raise ValueError(f"unknown method {method!r}")
    if model is not None and check_assignment(f, model):
        raise RuntimeError("complete search produced an invalid model")
    return model


def certify_satisfiable(f, method="auto"):
    """Exact verdict by truth table (n <= 20) or DPLL backtracking (n <= 64)."""
    return Verdict.UNSATISFIABLE if find_model(f, method) is None else Verdict.SATISFIABLE

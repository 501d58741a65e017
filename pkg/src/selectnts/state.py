"""Incremental search state: true-literal counts and the unsatisfied set.

The unsatisfied clauses live in a dense array with a position index, giving
O(1) insert, swap-remove and uniform sampling. ``break``/``make`` are
computed on demand from one occurrence list; nothing is cached per variable.

Variables are 1-based in the Python API and 0-based inside the kernels.
"""

from dataclasses import dataclass

import numpy as np
from numba import njit

from .rng import next_bit, randbelow


@njit(cache=True, nogil=True)
def _random_assignment(st, out):
    for i in range(out.shape[0]):
        out[i] = next_bit(st)


@njit(cache=True, nogil=True)
def _init(lits, starts, taut, assign, tc, unsat, upos, meta):
    n_unsat = 0
    for c in range(starts.shape[0] - 1):
        cnt = 0
        for j in range(starts[c], starts[c + 1]):
            code = lits[j]
            if assign[code >> 1] != ((code & 1) == 1):
                cnt += 1
        tc[c] = cnt
        upos[c] = -1
        if cnt == 0 and not taut[c]:
            upos[c] = n_unsat
            unsat[n_unsat] = c
            n_unsat += 1
    meta[0] = n_unsat
    meta[1] = 0


@njit(cache=True, nogil=True)
def _set_add(arr, pos, meta, c):
    k = meta[0]
    arr[k] = c
    pos[c] = k
    meta[0] = k + 1


@njit(cache=True, nogil=True)
def _set_remove(arr, pos, meta, c):
    k = meta[0] - 1
    p = pos[c]
    last = arr[k]
    arr[p] = last
    pos[last] = p
    pos[c] = -1
    meta[0] = k


@njit(cache=True, nogil=True)
def _flip(occ, occ_starts, assign, tc, unsat, upos, meta, v):
    was = assign[v]
    assign[v] = not was
    # code of the literal of v that becomes true
    t = 2 * v + (1 if was else 0)
    f = t ^ 1
    for j in range(occ_starts[t], occ_starts[t + 1]):
        c = occ[j]
        tc[c] += 1
        if tc[c] == 1:
            _set_remove(unsat, upos, meta, c)
    for j in range(occ_starts[f], occ_starts[f + 1]):
        c = occ[j]
        tc[c] -= 1
        if tc[c] == 0:
            _set_add(unsat, upos, meta, c)
    meta[1] += 1


@njit(cache=True, nogil=True)
def _break(occ, occ_starts, taut, assign, tc, v):
    t = 2 * v + (0 if assign[v] else 1)
    b = 0
    for j in range(occ_starts[t], occ_starts[t + 1]):
        c = occ[j]
        # a tautology keeps its complementary literal, so it never breaks
        if tc[c] == 1 and not taut[c]:
            b += 1
    return b


@njit(cache=True, nogil=True)
def _make(occ, occ_starts, assign, tc, v):
    f = 2 * v + (1 if assign[v] else 0)
    mk = 0
    for j in range(occ_starts[f], occ_starts[f + 1]):
        if tc[occ[j]] == 0:
            mk += 1
    return mk


@dataclass(eq=False)
class SearchState:
    """Assignment plus incrementally maintained per-clause counts.

    ``meta`` holds ``[number of unsatisfied clauses, flips in this try]`` so
    the kernels can update both in place.
    """

    assignment: np.ndarray
    true_count: np.ndarray
    unsat_list: np.ndarray
    unsat_pos: np.ndarray
    meta: np.ndarray

    @property
    def num_unsat(self):
        return int(self.meta[0])

    @property
    def flips_done(self):
        return int(self.meta[1])

    @property
    def unsat(self):
        return set(self.unsat_list[: self.meta[0]].tolist())

    def sample_unsat(self, rng):
        if self.meta[0] == 0:
            raise ValueError("no unsatisfied clause to sample")
        return int(self.unsat_list[randbelow(rng.state, self.meta[0])])

    def copy(self):
        return SearchState(
            self.assignment.copy(),
            self.true_count.copy(),
            self.unsat_list.copy(),
            self.unsat_pos.copy(),
            self.meta.copy(),
        )

    def same_as(self, other):
        """Exact equality of assignment, counts and unsatisfied set."""
        return (
            np.array_equal(self.assignment, other.assignment)
            and np.array_equal(self.true_count, other.true_count)
            and self.unsat == other.unsat
        )

    def index_consistent(self):
        k = self.meta[0]
        live = self.unsat_list[:k]
        if not np.array_equal(self.unsat_pos[live], np.arange(k)):
            return False
        return int((self.unsat_pos >= 0).sum()) == k


def random_assignment(n, rng):
    """Each variable independently True with probability 1/2."""
    if n < 1:
        raise ValueError("random_assignment requires n >= 1")
    out = np.empty(n, dtype=np.bool_)
    _random_assignment(rng.state, out)
    return out


def init_state(f, a):
    a = np.array(a, dtype=np.bool_)
    if len(a) != f.n:
        raise ValueError(f"assignment has {len(a)} entries, formula has {f.n} variables")
    s = SearchState(
        a,
        np.empty(f.m, dtype=np.int32),
        np.empty(f.m, dtype=np.int32),
        np.empty(f.m, dtype=np.int32),
        np.zeros(2, dtype=np.int64),
    )
    _init(f.lits, f.starts, f.taut, s.assignment, s.true_count, s.unsat_list, s.unsat_pos, s.meta)
    return s


def reinit_state(f, s):
    """Recompute ``s`` in place from its own assignment."""
    _init(f.lits, f.starts, f.taut, s.assignment, s.true_count, s.unsat_list, s.unsat_pos, s.meta)


def _check_var(f, v):
    if not 1 <= v <= f.n:
        raise ValueError(f"variable {v} outside 1..{f.n}")
    return v - 1


def flip(s, f, v):
    """Negate variable ``v`` (1-based) and update ``s`` in place."""
    _flip(f.occ, f.occ_starts, s.assignment, s.true_count, s.unsat_list, s.unsat_pos, s.meta,
          _check_var(f, v))
    return s


def break_of(s, f, v):
    return int(_break(f.occ, f.occ_starts, f.taut, s.assignment, s.true_count, _check_var(f, v)))


def make_of(s, f, v):
    return int(_make(f.occ, f.occ_starts, s.assignment, s.true_count, _check_var(f, v)))


def score_of(s, f, v):
    """Net gain in satisfied clauses if ``v`` were flipped."""
    return make_of(s, f, v) - break_of(s, f, v)

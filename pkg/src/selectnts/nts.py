"""SelectNTS: selection-count clause and variable weighting on top of ProbSAT.

Every clause selection bumps the clause's counter (cNTS) and every flip bumps
the flipped variable's counter (vNTS). Unsatisfied clauses whose counter has
reached ``beta`` form the hard-clause set (HSC); when it is non-empty the
clause is drawn from it instead of from all unsatisfied clauses. If the
probability-selected variable equals the one flipped in the previous step,
the clause-mate maximising ``score + vNTS / gamma`` is flipped instead.

Counters persist across tries unless ``SolverParams.reset_counters`` is set.
"""

import math
import re
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from numba import njit

from .probsat import ProbSatSearch, _sample_in_clause
from .rng import randbelow
from .state import _break, _make, _set_add, _set_remove, break_of, make_of

NO_VAR = -1


@dataclass(eq=False)
class NtsCounters:
    """cNTS per clause, vNTS per variable and the maintained HSC set.

    ``meta`` is ``[HSC size, global step counter]``. ``vnts`` is indexed
    0-based; :meth:`vnts_of` takes the usual 1-based variable.
    """

    cnts: np.ndarray
    vnts: np.ndarray
    hsc_list: np.ndarray
    hsc_pos: np.ndarray
    meta: np.ndarray

    @classmethod
    def fresh(cls, f):
        return cls(
            np.zeros(f.m, dtype=np.int64),
            np.zeros(f.n, dtype=np.int64),
            np.zeros(f.m, dtype=np.int32),
            np.full(f.m, -1, dtype=np.int32),
            np.zeros(2, dtype=np.int64),
        )

    @property
    def hsc(self):
        return set(self.hsc_list[: self.meta[0]].tolist())

    @property
    def num_hsc(self):
        return int(self.meta[0])

    @property
    def step(self):
        return int(self.meta[1])

    def vnts_of(self, v):
        return int(self.vnts[v - 1])

    def expected_hsc(self, s, beta):
        """Brute-force ``{c in unsat : cnts[c] >= beta}``."""
        return {c for c in s.unsat if self.cnts[c] >= beta}

    def reset(self):
        self.cnts[:] = 0
        self.vnts[:] = 0
        self.hsc_pos[:] = -1
        self.meta[:] = 0


@njit(cache=True, nogil=True)
def _update_cnts(cnts, hsc, hpos, cmeta, upos, beta, c):
    cnts[c] += 1
    if cnts[c] >= beta and hpos[c] < 0 and upos[c] >= 0:
        _set_add(hsc, hpos, cmeta, c)


@njit(cache=True, nogil=True)
def _rebuild_hsc(unsat, meta, cnts, hsc, hpos, cmeta, beta):
    for i in range(cmeta[0]):
        hpos[hsc[i]] = -1
    cmeta[0] = 0
    for i in range(meta[0]):
        c = unsat[i]
        if cnts[c] >= beta:
            _set_add(hsc, hpos, cmeta, c)


@njit(cache=True, nogil=True)
def _flip_hsc(occ, occ_starts, assign, tc, unsat, upos, meta, cnts, hsc, hpos, cmeta, beta, v):
    # unsat bookkeeping mirrors state._flip exactly, so traces stay comparable
    was = assign[v]
    assign[v] = not was
    t = 2 * v + (1 if was else 0)
    f = t ^ 1
    for j in range(occ_starts[t], occ_starts[t + 1]):
        c = occ[j]
        tc[c] += 1
        if tc[c] == 1:
            _set_remove(unsat, upos, meta, c)
            if hpos[c] >= 0:
                _set_remove(hsc, hpos, cmeta, c)
    for j in range(occ_starts[f], occ_starts[f + 1]):
        c = occ[j]
        tc[c] -= 1
        if tc[c] == 0:
            _set_add(unsat, upos, meta, c)
            if cnts[c] >= beta:
                _set_add(hsc, hpos, cmeta, c)
    meta[1] += 1


@njit(cache=True, nogil=True)
def _pick_clause(unsat, meta, hsc, cmeta, st):
    if cmeta[0] > 0:
        return hsc[randbelow(st, cmeta[0])]
    return unsat[randbelow(st, meta[0])]


@njit(cache=True, nogil=True)
def _cc_alternative(lits, starts, occ, occ_starts, taut, assign, tc, vnts, gamma, st, c, v,
                    random_ties, tiebuf):
    """Clause-mate of ``v`` with the greatest score + vnts/gamma, or ``v`` if none."""
    best = -math.inf
    nties = 0
    for j in range(starts[c], starts[c + 1]):
        x = lits[j] >> 1
        if x == v:
            continue
        score = _make(occ, occ_starts, assign, tc, x) - _break(occ, occ_starts, taut, assign, tc, x)
        sv = score + vnts[x] / gamma
        if sv > best:
            best = sv
            tiebuf[0] = x
            nties = 1
        elif sv == best:
            tiebuf[nties] = x
            nties += 1
    if nties == 0:
        return v
    if nties > 1 and random_ties:
        return tiebuf[randbelow(st, nties)]
    return tiebuf[0]


@njit(cache=True, nogil=True)
def _nts_steps(lits, starts, occ, occ_starts, taut, assign, tc, unsat, upos, meta,
               cnts, vnts, hsc, hpos, cmeta, beta, gamma, table, st, budget,
               last, trace, tpos, wbuf, tiebuf, cc_enabled, random_ties):
    steps = 0
    while steps < budget:
        if meta[0] == 0:
            return True, steps
        c = _pick_clause(unsat, meta, hsc, cmeta, st)
        _update_cnts(cnts, hsc, hpos, cmeta, upos, beta, c)
        i = _sample_in_clause(lits, starts, occ, occ_starts, taut, assign, tc, table, st, c, wbuf)
        v = lits[starts[c] + i] >> 1
        if cc_enabled and v == last[0]:
            v = _cc_alternative(lits, starts, occ, occ_starts, taut, assign, tc, vnts, gamma, st,
                                c, v, random_ties, tiebuf)
        last[0] = v
        vnts[v] += 1
        cmeta[1] += 1
        _flip_hsc(occ, occ_starts, assign, tc, unsat, upos, meta, cnts, hsc, hpos, cmeta, beta, v)
        if tpos[0] < trace.shape[0]:
            trace[tpos[0]] = v + 1
            tpos[0] += 1
        steps += 1
    return False, steps


class SelectNtsSearch(ProbSatSearch):
    """Resumable SelectNTS run; same driver as :class:`ProbSatSearch`."""

    name = "selectnts"

    def __init__(self, f, params=None, rng=None, counters=None, trace_len=0):
        super().__init__(f, params, rng, counters=counters, trace_len=trace_len)
        self.last = np.array([NO_VAR], dtype=np.int64)
        self.tiebuf = np.empty(max(f.max_clause_len, 1), dtype=np.int64)

    @property
    def best_var(self):
        """Variable flipped in the previous step of this try (1-based), or None."""
        return None if self.last[0] == NO_VAR else int(self.last[0]) + 1

    def new_try(self):
        super().new_try()
        self.last[0] = NO_VAR
        ctr = self.counters
        if self.params.reset_counters:
            ctr.reset()
        s = self.state
        _rebuild_hsc(s.unsat_list, s.meta, ctr.cnts, ctr.hsc_list, ctr.hsc_pos, ctr.meta,
                     self.params.beta)

    def run(self, budget):
        f, s, ctr, p = self.f, self.state, self.counters, self.params
        sat, done = _nts_steps(
            f.lits, f.starts, f.occ, f.occ_starts, f.taut, s.assignment, s.true_count,
            s.unsat_list, s.unsat_pos, s.meta, ctr.cnts, ctr.vnts, ctr.hsc_list, ctr.hsc_pos,
            ctr.meta, p.beta, float(p.gamma), self.table, self.rng.state, budget, self.last,
            self.trace, self.tpos, self.wbuf, self.tiebuf, p.cc_enabled, p.tie_break == "random",
        )
        self.total_flips += done
        return bool(sat), int(done)


def solve_selectnts(f, p=None, rng=None, time_limit=None, max_flips=None, counters=None,
                    trace_len=0):
    """Run SelectNTS; returns a :class:`~selectnts.probsat.RunResult`."""
    search = SelectNtsSearch(f, p, rng, counters=counters, trace_len=trace_len)
    result = search.solve(time_limit=time_limit, max_flips=max_flips)
    result.extra["trace"] = search.flip_trace
    return result


# Step-level API over a SearchState and NtsCounters. Variables are 1-based.

def update_cnts(ctr, s, c, beta):
    """Count one more selection of clause ``c``; admits it to the HSC at ``beta``."""
    _update_cnts(ctr.cnts, ctr.hsc_list, ctr.hsc_pos, ctr.meta, s.unsat_pos, beta, c)


def update_vnts(ctr, v):
    ctr.vnts[v - 1] += 1


def sync_hsc(ctr, s, beta):
    """Rebuild the HSC from scratch against the current unsatisfied set."""
    _rebuild_hsc(s.unsat_list, s.meta, ctr.cnts, ctr.hsc_list, ctr.hsc_pos, ctr.meta, beta)


def pick_clause(s, ctr, beta, rng):
    """Uniform over the HSC when non-empty, otherwise uniform over unsat."""
    if s.num_unsat == 0:
        raise ValueError("no unsatisfied clause to pick")
    return int(_pick_clause(s.unsat_list, s.meta, ctr.hsc_list, ctr.meta, rng.state))


def flip_tracked(s, f, ctr, beta, v):
    """Flip ``v`` keeping the HSC coherent with the new unsatisfied set."""
    _flip_hsc(f.occ, f.occ_starts, s.assignment, s.true_count, s.unsat_list, s.unsat_pos, s.meta,
              ctr.cnts, ctr.hsc_list, ctr.hsc_pos, ctr.meta, beta, v - 1)
    return s


def s_v(s, f, ctr, v, gamma):
    return (make_of(s, f, v) - break_of(s, f, v)) + ctr.vnts[v - 1] / gamma


def cc_filter(s, f, ctr, c, v, best, gamma, rng, tie_break="random"):
    """Keep ``v`` unless it repeats ``best``; then take the best clause-mate."""
    if best is None or v != best:
        return v
    tiebuf = np.empty(max(f.max_clause_len, 1), dtype=np.int64)
    x = _cc_alternative(f.lits, f.starts, f.occ, f.occ_starts, f.taut, s.assignment,
                        s.true_count, ctr.vnts, float(gamma), rng.state, c, v - 1,
                        tie_break == "random", tiebuf)
    return int(x) + 1


# Tuned (beta, gamma) presets.
# HRS: ratio -> ((beta, gamma) for n <= 600, (beta, gamma) for n > 600)
HRS_PRESETS = {
    4.3: ((10, 1200), (10, 1200)),
    5.206: ((80, 300), (60, 800)),
    5.5: ((110, 1200), (110, 900)),
    5.699: ((110, 1200), (110, 900)),
    7.821: ((400, 300), (400, 300)),
}
UNIFORM_PRESETS = {
    (5, "medium"): (5_000_000, 500_000),
    (5, "huge"): (700, 600),
    (7, "medium"): (700_000, 500_000),
    (7, "huge"): (2000, 4000),
}
# phase-transition ratios; at or above these an instance counts as "medium"
THRESHOLD_RATIO = {5: 21.117, 7: 87.79}
FALLBACK = (700, 600)


def infer_regime(k, ratio):
    thr = THRESHOLD_RATIO.get(k)
    if thr is None or ratio is None:
        return None
    return "medium" if ratio >= thr - 0.01 else "huge"


def default_params_for(family, ratio=None, n=None, regime=None, k=None):
    """Preset ``(beta, gamma)`` for an instance family.

    ``family`` is ``"hrs"`` or ``"uniform"`` (``"uniform-5"`` style names set
    ``k``). Cells not covered by a preset fall back to ``(700, 600)`` with a
    warning.
    """
    family = family.lower()
    if family.startswith("uniform"):
        if "-" in family:
            k = int(family.split("-")[1].lstrip("k"))
        if regime is None:
            regime = infer_regime(k, ratio)
        pair = UNIFORM_PRESETS.get((k, regime))
        if pair is not None:
            return pair
    elif family == "hrs" and ratio is not None:
        for r, (small, large) in HRS_PRESETS.items():
            if abs(ratio - r) < 1e-3:
                return large if n is not None and n > 600 else small
    warnings.warn(
        f"no preset for family={family!r} ratio={ratio} n={n} regime={regime} k={k}; "
        f"using beta={FALLBACK[0]}, gamma={FALLBACK[1]}",
        stacklevel=2,
    )
    return FALLBACK


_UNIFORM_NAME = re.compile(r"unif-k(\d+)-r([0-9.]+)-v(\d+)", re.IGNORECASE)
_HRS_NAME = re.compile(r"qhid|hrs", re.IGNORECASE)


def infer_family(f, name=None):
    """``(family, k, ratio)`` from a competition-style file name or the formula."""
    base = Path(name).name if name else ""
    hit = _UNIFORM_NAME.search(base)
    if hit:
        return "uniform", int(hit.group(1)), float(hit.group(2).rstrip("."))
    if _HRS_NAME.search(base):
        return "hrs", None, f.ratio
    lengths = np.diff(f.starts)
    if f.m and lengths.min() == lengths.max():
        return "uniform", int(lengths[0]), f.ratio
    return "unknown", None, f.ratio


def infer_preset(f, name=None, regime=None):
    family, k, ratio = infer_family(f, name)
    return default_params_for(family, ratio=ratio, n=f.n, regime=regime, k=k)

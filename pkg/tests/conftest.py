import random

import numpy as np
import pytest

from selectnts.cnf import Formula


def random_formula(rnd, n, m, kmin=1, kmax=5, allow_taut=False):
    """Clauses of distinct variables drawn with Python's own ``random``."""
    clauses = []
    for _ in range(m):
        k = rnd.randint(kmin, min(kmax, n))
        vs = rnd.sample(range(1, n + 1), k)
        clause = [v if rnd.random() < 0.5 else -v for v in vs]
        if allow_taut and rnd.random() < 0.1:
            clause.append(-clause[0])
        clauses.append(clause)
    return Formula.from_clauses(n, clauses)


def eval_clause(clause, a):
    """Plain-Python clause evaluation over 0-based assignment ``a``."""
    return any(a[abs(x) - 1] == (x > 0) for x in clause)


def count_sat(f, a):
    return sum(eval_clause(c, a) for c in f.clauses)


def unsat_ids(f, a):
    """Unsatisfied ids by direct evaluation, skipping tautologies."""
    return {
        c for c, clause in enumerate(f.clauses)
        if not eval_clause(clause, a) and not f.taut[c]
    }


@pytest.fixture
def rnd():
    return random.Random(12345)


@pytest.fixture
def small_formula():
    return Formula.from_clauses(3, [[1, -2], [2, 3]])


def as_assignment(*vals):
    return np.array(vals, dtype=bool)

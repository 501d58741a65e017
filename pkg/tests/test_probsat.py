import numpy as np
import pytest
from scipy.stats import chisquare

from selectnts.cnf import Formula, check_assignment
from selectnts.instances import GenSpec, Verdict, certify_satisfiable, gen_uniform_ksat
from selectnts.probsat import (
    ProbShape,
    SolverParams,
    Status,
    prob_value,
    sample_variable,
    solve_probsat,
    variable_probabilities,
)
from selectnts.rng import Rng
from selectnts.state import init_state

from conftest import unsat_ids

POLY = ProbShape("polynomial", 2.06)


def test_prob_value_frozen_values():
    # 40-digit mpmath evaluations
    assert prob_value(0, POLY) == pytest.approx(1.242397104469390415, rel=1e-14)
    assert prob_value(1, POLY) == pytest.approx(0.2665431844564756345, rel=1e-14)
    assert prob_value(2, ProbShape("exponential", 3.7)) == pytest.approx(
        0.07304601899196493791, rel=1e-14)


def test_prob_value_exponential_zero_is_one():
    for cb in (0.5, 1.0, 3.0, 3.7, 5.4, 100.0):
        assert prob_value(0, ProbShape("exponential", cb)) == 1.0


def test_prob_value_positive_and_decreasing():
    for shape in (POLY, ProbShape("polynomial", 0.3), ProbShape("exponential", 3.0)):
        vals = [prob_value(b, shape) for b in range(60)]
        assert all(v > 0 for v in vals)
        assert all(a > b for a, b in zip(vals, vals[1:]))


def test_prob_value_rejects_negative_break():
    with pytest.raises(ValueError):
        prob_value(-1, POLY)


@pytest.mark.parametrize("kind, cb", [("polynomial", -0.1), ("exponential", 0.0),
                                      ("exponential", -1.0), ("linear", 1.0)])
def test_shape_validation(kind, cb):
    with pytest.raises(ValueError):
        ProbShape(kind, cb)


def test_default_shape_by_clause_length():
    assert ProbShape.default_for(3) == ProbShape("polynomial", 2.06)
    assert ProbShape.default_for(2).kind == "polynomial"
    assert [ProbShape.default_for(k).cb for k in (4, 5, 6, 7, 9)] == [3.0, 3.7, 5.0, 5.4, 5.4]
    assert all(ProbShape.default_for(k).kind == "exponential" for k in (4, 5, 6, 7, 9))


@pytest.mark.parametrize("field, value", [("max_tries", 0), ("max_steps", 0), ("beta", 0),
                                          ("gamma", 0), ("tie_break", "first")])
def test_params_validation(field, value):
    with pytest.raises(ValueError):
        SolverParams(**{field: value})


def _five_clause_state():
    """Clause 0 = (1 2 3 4 5) unsatisfied; variables have breaks 0, 1, 1, 2, 3."""
    clauses = [[-1, -2, -3, -4, -5], [2, 6], [3, 7], [4, 6], [4, 7], [5, 6], [5, 7], [5, 8]]
    f = Formula.from_clauses(8, clauses)
    a = np.zeros(8, dtype=bool)
    a[:5] = True
    return f, init_state(f, a)


def _breaks_by_recount(f, s, vars_):
    out = []
    for v in vars_:
        a = s.assignment.copy()
        before = unsat_ids(f, a)
        a[v - 1] = not a[v - 1]
        out.append(len(unsat_ids(f, a) - before))
    return out


def test_fixture_breaks():
    f, s = _five_clause_state()
    assert s.unsat == {0}
    assert _breaks_by_recount(f, s, [1, 2, 3, 4, 5]) == [0, 1, 1, 2, 3]


@pytest.mark.parametrize("shape", [POLY, ProbShape("exponential", 3.7)])
def test_sample_variable_chi_square(shape):
    f, s = _five_clause_state()
    vars_ = f.clause_variables(0)
    brk = _breaks_by_recount(f, s, vars_)
    if shape.kind == "polynomial":
        w = np.array([(0.9 + b) ** -shape.cb for b in brk])
    else:
        w = np.array([shape.cb ** -b for b in brk])
    probs = w / w.sum()
    r = Rng(99)
    draws = 10**5
    got = np.bincount([sample_variable(s, f, 0, shape, r) for _ in range(draws)], minlength=9)
    assert got[[0, 6, 7, 8]].sum() == 0
    assert chisquare(got[1:6], probs * draws).pvalue > 0.01


def test_variable_probabilities_normalized():
    f, s = _five_clause_state()
    p = variable_probabilities(s, f, 0, POLY)
    assert set(p) == {1, 2, 3, 4, 5}
    assert abs(sum(p.values()) - 1.0) < 1e-12


def test_weights_three_to_one():
    # breaks 0 and 1 under cb=3 give weights 1 and 1/3
    f = Formula.from_clauses(3, [[-1, -2], [2, 3]])
    s = init_state(f, np.array([True, True, False]))
    p = variable_probabilities(s, f, 0, ProbShape("exponential", 3.0))
    assert p[1] == pytest.approx(0.75, abs=1e-15) and p[2] == pytest.approx(0.25, abs=1e-15)


def test_equal_break_uniform():
    f = Formula.from_clauses(3, [[1, 2, 3]])
    s = init_state(f, np.zeros(3, dtype=bool))
    p = variable_probabilities(s, f, 0, POLY)
    assert all(abs(x - 1 / 3) < 1e-15 for x in p.values())


def test_empty_formula_satisfied_immediately():
    res = solve_probsat(Formula.from_clauses(4, []), SolverParams(), Rng(0))
    assert res.status is Status.SATISFIED and res.total_flips == 0 and res.tries_used == 1
    assert len(res.model) == 4


def test_contradiction_unknown():
    f = Formula.from_clauses(1, [[1], [-1]])
    res = solve_probsat(f, SolverParams(max_tries=3, max_steps=500), Rng(0))
    assert res.status is Status.UNKNOWN and res.model is None
    assert res.total_flips == 1500 and res.tries_used == 3


def test_flip_limit_and_time_limit_end_as_unknown():
    f = Formula.from_clauses(1, [[1], [-1]])
    res = solve_probsat(f, SolverParams(), Rng(0), max_flips=1234)
    assert res.status is Status.UNKNOWN and res.total_flips == 1234
    res = solve_probsat(f, SolverParams(max_steps=10**9), Rng(0), time_limit=0.05)
    assert res.status is Status.UNKNOWN and res.wall_time < 2.0


def test_determinism():
    f = gen_uniform_ksat(GenSpec(n=80, k=3, ratio=4.2, seed=3))
    p = SolverParams(max_tries=2, max_steps=3000)
    a = solve_probsat(f, p, Rng(5), trace_len=6000)
    b = solve_probsat(f, p, Rng(5), trace_len=6000)
    assert a.total_flips == b.total_flips and a.status == b.status
    assert np.array_equal(a.extra["trace"], b.extra["trace"])


def _certified(k, n, ratio, count):
    out, seed = [], 0
    while len(out) < count:
        f = gen_uniform_ksat(GenSpec(n=n, k=k, ratio=ratio, seed=seed))
        if certify_satisfiable(f) is Verdict.SATISFIABLE:
            out.append(f)
        seed += 1
    return out


def test_solves_100_certified_3sat_n50():
    formulas = _certified(3, 50, 4.2, 100)
    p = SolverParams(max_tries=10, max_steps=10**6, shape=POLY)
    solved = 0
    for j, f in enumerate(formulas):
        res = solve_probsat(f, p, Rng(j))
        if res.solved:
            solved += 1
            assert check_assignment(f, res.model) == []
    assert solved >= 99

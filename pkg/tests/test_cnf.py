import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from selectnts.cnf import (
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
    parse_solution,
    write_dimacs,
)
from selectnts.instances import GenSpec, gen_uniform_ksat

from conftest import as_assignment, eval_clause, random_formula


def test_parse_basic():
    f = parse_dimacs(b"p cnf 3 2\n1 -2 0\n2 3 0\n")
    assert (f.n, f.m) == (3, 2)
    assert f.clauses == [[1, -2], [2, 3]]
    assert f.ratio == 2 / 3


def test_parse_accepts_str_comments_and_split_clauses():
    text = "c hello\nc world\np cnf 3 2\n1\n -2 0 2\n\t3 0\n"
    assert parse_dimacs(text).clauses == [[1, -2], [2, 3]]


def test_clause_literals():
    f = parse_dimacs("p cnf 3 1\n-3 1 0\n")
    assert f.clause_literals(0) == [Literal(3, False), Literal(1, True)]
    assert f.clause_variables(0) == [3, 1]


@pytest.mark.parametrize(
    "text, exc",
    [
        ("p cnf 2 2\n1 0\n", HeaderClauseCountMismatch),
        ("p cnf 2 1\n1 0\n2 0\n", HeaderClauseCountMismatch),
        ("p cnf 1 1\n0\n", EmptyClause),
        ("p cnf 2 2\n1 0 0\n", EmptyClause),
        ("p cnf 2 1\n1 3 0\n", VariableOutOfRange),
        ("p cnf 2 1\n-3 0\n", VariableOutOfRange),
        ("p cnf 2 1\n1 x 0\n", MalformedToken),
        ("p cnf 2 1\n1 2.5 0\n", MalformedToken),
        ("p dnf 2 1\n1 0\n", MalformedToken),
        ("p cnf two 1\n1 0\n", MalformedToken),
        ("1 2 0\n", MissingHeader),
        ("c only comments\n", MissingHeader),
        ("", MissingHeader),
    ],
)
def test_parse_errors(text, exc):
    with pytest.raises(exc):
        parse_dimacs(text)


def test_parse_errors_are_value_errors():
    with pytest.raises(ValueError):
        parse_dimacs("p cnf 1 1\n0\n")


def test_duplicate_literals_removed():
    f = parse_dimacs("p cnf 3 1\n1 -2 1 -2 3 0\n")
    assert f.clauses == [[1, -2, 3]]
    assert not f.taut[0]


def test_tautology_kept_and_flagged():
    f = parse_dimacs("p cnf 2 2\n1 -1 2 0\n2 0\n")
    assert f.m == 2
    assert f.clauses[0] == [1, -1, 2]
    assert f.taut.tolist() == [True, False]


def test_missing_final_zero_tolerated():
    assert parse_dimacs("p cnf 2 2\n1 0\n2\n").clauses == [[1], [2]]


def test_percent_terminator():
    assert parse_dimacs("p cnf 2 1\n1 2 0\n%\n0\n").m == 1


def test_formula_is_immutable(small_formula):
    with pytest.raises(AttributeError):
        small_formula.n = 4
    with pytest.raises(ValueError):
        small_formula.lits[0] = 0


def test_write_empty_formula():
    f = Formula.from_clauses(4, [])
    assert write_dimacs(f) == b"p cnf 4 0\n"
    assert parse_dimacs(write_dimacs(f)) == f


def test_write_round_trip_small(small_formula):
    assert parse_dimacs(write_dimacs(small_formula)) == small_formula


def test_round_trip_100_generated():
    for seed in range(100):
        f = gen_uniform_ksat(GenSpec(n=30, k=3 + seed % 3, ratio=4.0, seed=seed))
        g = parse_dimacs(write_dimacs(f, comments=["seed", str(seed)]))
        assert g == f
        assert g.clauses == f.clauses


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 12), st.lists(st.lists(st.integers(-12, 12).filter(bool), min_size=1,
                                               max_size=6), max_size=25))
def test_round_trip_property(n, raw):
    clauses = [[x for x in c if abs(x) <= n] or [1] for c in raw]
    f = Formula.from_clauses(n, clauses)
    assert parse_dimacs(write_dimacs(f)) == f


def test_occurrence_lists_consistent(rnd):
    for _ in range(30):
        f = random_formula(rnd, rnd.randint(1, 25), rnd.randint(0, 60), allow_taut=True)
        rebuilt = {}
        for v in range(1, f.n + 1):
            for lit in (v, -v):
                ids = f.occurrences(lit).tolist()
                assert ids == sorted(ids)
                for c in ids:
                    rebuilt.setdefault(c, set()).add(lit)
        for c, clause in enumerate(f.clauses):
            assert rebuilt.get(c, set()) == set(clause)


def test_check_assignment_examples(small_formula):
    assert check_assignment(small_formula, as_assignment(True, True, True)) == []
    assert check_assignment(small_formula, as_assignment(False, True, False)) == [0]


def test_check_assignment_wrong_length(small_formula):
    with pytest.raises(ValueError):
        check_assignment(small_formula, [True])


def test_check_assignment_vs_truth_table(rnd):
    for _ in range(40):
        n = rnd.randint(1, 12)
        f = random_formula(rnd, n, rnd.randint(0, 3 * n))
        for bits in itertools.product([False, True], repeat=n):
            expect = [c for c, cl in enumerate(f.clauses) if not eval_clause(cl, bits)]
            assert check_assignment(f, np.array(bits)) == expect


def test_solution_format_round_trip():
    a = as_assignment(True, False, True)
    text = format_solution(a)
    assert text == "s SATISFIABLE\nv 1 -2 3 0\n"
    assert parse_solution(text, 3).tolist() == a.tolist()
    assert format_solution(None) == "s UNKNOWN\n"
    assert parse_solution("s UNKNOWN\n", 3) is None

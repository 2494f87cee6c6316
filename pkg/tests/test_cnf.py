import random

import pytest

from snapsat.cnf import (
    Assignment,
    CnfFormula,
    DimacsParseError,
    evaluate,
    falsified_clauses,
    parse_dimacs,
)

from conftest import random_formula, truth_table_models


def test_parse_basic():
    f = parse_dimacs("p cnf 3 2\n1 -3 0\n2 3 -1 0")
    assert f.num_vars == 3
    assert f.clauses == ((1, -3), (2, 3, -1))
    assert f.header_clauses == 2


def test_parse_skips_comments():
    f = parse_dimacs("c comment\np cnf 2 1\n1 2 0")
    assert f.num_vars == 2
    assert f.num_clauses == 1


def test_parse_drops_tautologies():
    f = parse_dimacs("p cnf 2 1\n1 -1 0")
    assert f.num_vars == 2
    assert f.num_clauses == 0
    assert f.tautologies_dropped == 1


def test_parse_dedups_literals():
    f = parse_dimacs("p cnf 2 1\n1 1 2 0")
    assert f.clauses == ((1, 2),)


def test_parse_clause_spanning_lines():
    f = parse_dimacs("p cnf 3 1\n1 2\n3 0")
    assert f.clauses == ((1, 2, 3),)


def test_parse_percent_trailer():
    f = parse_dimacs("p cnf 2 1\n1 2 0\n%\n0\n")
    assert f.num_clauses == 1


@pytest.mark.parametrize(
    "text,fragment",
    [
        ("1 2 0", "header"),
        ("p cnf 2 1\np cnf 2 1\n1 0", "duplicate header"),
        ("p cnf 2 1\n1 3 0", "out of range"),
        ("p cnf 2 1\n1 2", "not 0-terminated"),
        ("p cnf 2 1\n0", "empty clause"),
        ("p cnf 2 1\n1 x 0", "bad literal"),
        ("p qbf 2 1\n1 0", "malformed header"),
    ],
)
def test_parse_errors(text, fragment):
    with pytest.raises(DimacsParseError) as exc:
        parse_dimacs(text)
    assert fragment in str(exc.value)


def test_parse_errors_name_line_numbers():
    with pytest.raises(DimacsParseError, match="line 3"):
        parse_dimacs("c intro\np cnf 2 2\n1 3 0")


def test_dimacs_round_trip():
    rng = random.Random(11)
    for _ in range(25):
        f = random_formula(rng)
        again = parse_dimacs(f.to_dimacs())
        assert again.num_vars == f.num_vars
        assert again.clauses == f.clauses


def test_evaluate_examples():
    f = parse_dimacs("p cnf 2 2\n1 2 0\n-1 2 0")
    assert evaluate(f, Assignment.from01("11")) is True
    assert evaluate(f, Assignment.from01("10")) is False


def test_evaluate_vacuous():
    f = CnfFormula(num_vars=3, clauses=())
    for bits in range(8):
        assert evaluate(f, Assignment(3, bits))


def test_evaluate_length_mismatch():
    f = parse_dimacs("p cnf 2 1\n1 2 0")
    with pytest.raises(ValueError):
        evaluate(f, Assignment.from01("101"))


def test_falsified_clauses_examples():
    f = parse_dimacs("p cnf 2 2\n1 2 0\n-1 2 0")
    assert falsified_clauses(f, Assignment.from01("10")) == [1]
    assert falsified_clauses(f, Assignment.from01("11")) == []
    g = parse_dimacs("p cnf 2 2\n1 0\n2 0")
    assert falsified_clauses(g, Assignment.from01("00")) == [0, 1]


def test_evaluate_agrees_with_falsified():
    rng = random.Random(5)
    for _ in range(100):
        f = random_formula(rng)
        a = Assignment(f.num_vars, rng.getrandbits(f.num_vars))
        assert evaluate(f, a) == (falsified_clauses(f, a) == [])


def test_evaluate_agrees_with_truth_table():
    rng = random.Random(7)
    for _ in range(20):
        f = random_formula(rng, max_vars=8)
        models = set(truth_table_models(f))
        for bits in range(1 << f.num_vars):
            assert evaluate(f, Assignment(f.num_vars, bits)) == (bits in models)


def test_assignment_round_trip():
    a = Assignment.from01("10110")
    assert a.to01() == "10110"
    assert a.get(1) is True and a.get(2) is False and a.get(3) is True
    assert a.ones() == 3


def test_assignment_rejects_bad_input():
    with pytest.raises(ValueError):
        Assignment.from01("10x")
    with pytest.raises(ValueError):
        Assignment(3, 8)  # bits beyond length
    with pytest.raises(IndexError):
        Assignment.from01("10").get(3)


def test_assignment_ops():
    a = Assignment.from01("1010")
    b = Assignment.from01("0110")
    assert (a ^ b).to01() == "1100"
    assert (a | b).to01() == "1110"
    assert a.complement().to01() == "0101"
    with pytest.raises(ValueError):
        a ^ Assignment.from01("10")


def test_assignment_immutable_and_hashable():
    a = Assignment.from01("10")
    with pytest.raises(AttributeError):
        a.bits = 3
    assert len({a, Assignment.from01("10"), Assignment.from01("01")}) == 2

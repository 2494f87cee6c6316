import random
import stat
import sys
from pathlib import Path

import pytest

from snapsat.cnf import Assignment, PartialAssignment, evaluate, parse_dimacs
from snapsat.solver import (
    ExternalBackend,
    InternalBackend,
    SolverInconsistencyError,
    SolverOutputError,
    SolverProcessError,
    UnsatFormulaError,
    blocking_clause,
    external_solve_adapter,
    generate_distinct,
    solve,
)

from conftest import random_formula, truth_table_models, truth_table_sat

F_OR = parse_dimacs("p cnf 2 2\n1 2 0\n-1 2 0")


def test_solve_forced_by_unit_propagation():
    fixed = PartialAssignment.fix(Assignment.from01("10"), Assignment.from01("10"))
    model = solve(F_OR, fixed=fixed, seed=1)
    assert model is not None and model.get(2) is True and model.get(1) is True


def test_solve_unsat():
    f = parse_dimacs("p cnf 1 2\n1 0\n-1 0")
    assert solve(f, seed=0) is None


def test_solve_models_across_seeds():
    f = parse_dimacs("p cnf 2 1\n1 2 0")
    expected = set(truth_table_models(f))
    assert len(expected) == 3
    for seed in range(10):
        model = solve(f, seed=seed)
        assert model is not None
        assert model.bits in expected
        assert evaluate(f, model)


def test_solve_respects_fixed_bits():
    rng = random.Random(21)
    for _ in range(40):
        f = random_formula(rng)
        mask = rng.getrandbits(f.num_vars)
        bits = rng.getrandbits(f.num_vars) & mask
        fixed = PartialAssignment(f.num_vars, bits, mask)
        model = solve(f, fixed=fixed, seed=rng.randrange(1000))
        if model is not None:
            assert evaluate(f, model)
            assert (model.bits ^ bits) & mask == 0
        else:
            # oracle: no truth-table model agrees with the fixed bits
            assert all(
                (m ^ bits) & mask != 0 for m in truth_table_models(f)
            )


def test_verdicts_match_truth_table():
    rng = random.Random(3)
    sat = unsat = 0
    for trial in range(60):
        f = random_formula(rng)
        want = truth_table_sat(f)
        got = solve(f, seed=trial)
        assert (got is not None) == want
        if want:
            sat += 1
            assert evaluate(f, got)
        else:
            unsat += 1
    assert sat > 5 and unsat > 5  # the mix actually exercises both paths


def test_generate_distinct_enumerates_all_models():
    f = parse_dimacs("p cnf 2 1\n1 2 0")
    models = generate_distinct(f, 10, seed=4)
    assert len(models) == 3
    assert len(set(models)) == 3
    assert {m.bits for m in models} == set(truth_table_models(f))


def test_generate_distinct_single_model():
    f = parse_dimacs("p cnf 2 2\n1 0\n2 0")
    models = generate_distinct(f, 5, seed=0)
    assert [m.to01() for m in models] == ["11"]


def test_generate_distinct_rejects_bad_n():
    with pytest.raises(ValueError):
        generate_distinct(F_OR, 0)


def test_generate_distinct_unsat():
    f = parse_dimacs("p cnf 1 2\n1 0\n-1 0")
    with pytest.raises(UnsatFormulaError, match="no solutions"):
        generate_distinct(f, 3)


def test_generate_distinct_deterministic():
    f = random_formula(random.Random(10))  # satisfiable, many models
    a = generate_distinct(f, 8, seed=42)
    b = generate_distinct(f, 8, seed=42)
    assert len(a) == 8
    assert a == b


def test_blocking_clause():
    a = Assignment.from01("101")
    assert blocking_clause(a) == [-1, 2, -3]


def test_counters_by_category():
    backend = InternalBackend(seed=1)
    backend.generate_distinct(F_OR, 2)
    assert backend.counters.generate_calls == 2
    backend.verify(F_OR, Assignment.from01("11"))
    assert backend.counters.verify_calls == 1
    fixed = PartialAssignment.fix(Assignment.from01("00"), Assignment.from01("10"))
    backend.repair(F_OR, fixed)
    assert backend.counters.repair_calls == 1
    assert backend.counters.generate_time_s >= 0.0


# ---------------------------------------------------------------------------
# external adapter
# ---------------------------------------------------------------------------


def _script(tmp_path: Path, name: str, body: str) -> str:
    path = tmp_path / name
    path.write_text(f"#!{sys.executable}\n" + body)
    path.chmod(path.stat().st_mode | stat.S_IEXEC)
    return f"{sys.executable} {path}"


GOOD_SOLVER = """\
import sys
sys.path.insert(0, {src!r})
from snapsat.cnf import parse_dimacs_file
from snapsat.solver import solve
f = parse_dimacs_file(sys.argv[1])
m = solve(f, seed=7)
if m is None:
    print("s UNSATISFIABLE")
else:
    print("s SATISFIABLE")
    lits = [v if m.get(v) else -v for v in range(1, f.num_vars + 1)]
    print("v " + " ".join(map(str, lits)) + " 0")
"""


@pytest.fixture
def good_cmd(tmp_path):
    src = str(Path(__file__).resolve().parent.parent / "src")
    return _script(tmp_path, "good.py", GOOD_SOLVER.format(src=src))


def test_external_adapter_sat(good_cmd):
    model = external_solve_adapter(F_OR, None, good_cmd)
    assert model is not None
    assert evaluate(F_OR, model)


def test_external_adapter_unsat(good_cmd):
    f = parse_dimacs("p cnf 1 2\n1 0\n-1 0")
    assert external_solve_adapter(f, None, good_cmd) is None


def test_external_adapter_fixed_bits_become_units(tmp_path):
    # the appended unit clause for fixed x3=0 must make x3 false
    catcher = _script(
        tmp_path,
        "catch.py",
        "import sys\n"
        "text = open(sys.argv[1]).read()\n"
        "assert '-3 0' in text.splitlines(), text\n"
        "print('s SATISFIABLE')\n"
        "print('v 1 2 -3 0')\n",
    )
    f = parse_dimacs("p cnf 3 1\n1 2 0")
    fixed = PartialAssignment.fix(Assignment.from01("000"), Assignment.from01("001"))
    model = external_solve_adapter(f, fixed, catcher)
    assert model.to01() == "110"


def test_external_adapter_parses_value_lines(tmp_path):
    cmd = _script(
        tmp_path,
        "fixed.py",
        "print('s SATISFIABLE')\nprint('v 1 -2 0')\n",
    )
    f = parse_dimacs("p cnf 2 1\n1 2 0")
    model = external_solve_adapter(f, None, cmd)
    assert model.to01() == "10"


def test_external_adapter_rejects_invalid_model(tmp_path):
    liar = _script(
        tmp_path, "liar.py", "print('s SATISFIABLE')\nprint('v -1 -2 0')\n"
    )
    with pytest.raises(SolverInconsistencyError):
        external_solve_adapter(F_OR, None, liar)


def test_external_adapter_rejects_garbage(tmp_path):
    cmd = _script(tmp_path, "garbage.py", "print('hello world')\n")
    with pytest.raises(SolverOutputError):
        external_solve_adapter(F_OR, None, cmd)


def test_external_adapter_rejects_partial_model(tmp_path):
    cmd = _script(tmp_path, "partial.py", "print('s SATISFIABLE')\nprint('v 1 0')\n")
    with pytest.raises(SolverOutputError, match="missing variable"):
        external_solve_adapter(F_OR, None, cmd)


def test_external_adapter_process_failure(tmp_path):
    cmd = _script(tmp_path, "crash.py", "import sys\nsys.exit(3)\n")
    with pytest.raises(SolverProcessError):
        external_solve_adapter(F_OR, None, cmd)


def test_external_adapter_path_placeholder(tmp_path, good_cmd):
    model = external_solve_adapter(F_OR, None, good_cmd + " {path}")
    assert model is not None


def test_external_backend_counts(good_cmd):
    backend = ExternalBackend(good_cmd)
    models = backend.generate_distinct(F_OR, 3)
    assert len(models) == 3
    assert backend.counters.generate_calls == 3
    assert len({m.bits for m in models}) == 3

"""SAT backends: an internal CDCL solver and an external-solver adapter.

Solver calls come in three flavors with very different costs: generating a
fresh model, repairing a partial assignment, and verifying a candidate.
Backends count each category separately so a run can show it verified more
than it repaired and repaired more than it generated.
"""

from __future__ import annotations

import os
import random
import shlex
import subprocess
import tempfile
import time
from dataclasses import dataclass, field

from .cnf import Assignment, CnfFormula, PartialAssignment, evaluate


class UnsatFormulaError(Exception):
    """Raised when a formula that must be satisfiable has no solutions."""


class ExternalSolverError(Exception):
    """Base for external-adapter failures."""


class SolverProcessError(ExternalSolverError):
    """External solver exited abnormally without a verdict."""


class SolverTimeoutError(ExternalSolverError):
    """External solver exceeded its time limit."""


class SolverOutputError(ExternalSolverError):
    """External solver output could not be parsed as a verdict + model."""


class SolverInconsistencyError(ExternalSolverError):
    """External solver claimed SAT but its model failed re-verification."""


@dataclass
class CallCounters:
    generate_calls: int = 0
    repair_calls: int = 0
    verify_calls: int = 0
    generate_time_s: float = 0.0
    repair_time_s: float = 0.0
    verify_time_s: float = 0.0


def blocking_clause(a: Assignment) -> list[int]:
    """Negation of a full assignment; forces the next model to differ."""
    return [-(i + 1) if a.bits >> i & 1 else (i + 1) for i in range(a.n)]


# --------------------------------------------------------------------------
# Internal CDCL solver
# --------------------------------------------------------------------------

_RESTART_BASE = 256
_RESTART_GROWTH = 1.3


def _cdcl(
    num_vars: int,
    clauses: list[list[int]],
    rng: random.Random,
    fixed_lits=(),
) -> int | None:
    """Solve one instance; returns model bits or None for UNSAT.

    Watched-literal propagation, 1-UIP clause learning with backjumping,
    and geometrically spaced restarts that reshuffle the seeded random
    branching order and phases. fixed_lits are enqueued as root facts, so
    UNSAT here means "unsatisfiable under those assumptions".
    """
    work = [list(c) for c in clauses]
    watches: dict[int, list[int]] = {}
    assign = [0] * (num_vars + 1)  # 0 free, 1 true, -1 false
    level = [0] * (num_vars + 1)
    reason: list[int | None] = [None] * (num_vars + 1)
    trail: list[int] = []
    trail_lim: list[int] = []
    qhead = 0

    def value(lit: int) -> int:
        v = assign[abs(lit)]
        return 0 if v == 0 else (v if lit > 0 else -v)

    def enqueue(lit: int, rsn: int | None):
        var = abs(lit)
        assign[var] = 1 if lit > 0 else -1
        level[var] = len(trail_lim)
        reason[var] = rsn
        trail.append(lit)

    def attach(ci: int):
        for lit in work[ci][:2]:
            watches.setdefault(lit, []).append(ci)

    root_lits: list[int] = []
    for ci, cl in enumerate(work):
        if len(cl) == 1:
            root_lits.append(cl[0])
        else:
            attach(ci)
    root_lits.extend(fixed_lits)

    def propagate() -> int | None:
        nonlocal qhead
        while qhead < len(trail):
            neg = -trail[qhead]
            qhead += 1
            wl = watches.get(neg)
            if not wl:
                continue
            i = 0
            while i < len(wl):
                ci = wl[i]
                cl = work[ci]
                if cl[0] == neg:
                    cl[0], cl[1] = cl[1], cl[0]
                w0 = cl[0]
                if value(w0) == 1:
                    i += 1
                    continue
                moved = False
                for j in range(2, len(cl)):
                    if value(cl[j]) != -1:
                        cl[1], cl[j] = cl[j], cl[1]
                        watches.setdefault(cl[1], []).append(ci)
                        wl[i] = wl[-1]
                        wl.pop()
                        moved = True
                        break
                if moved:
                    continue
                if value(w0) == -1:
                    return ci  # conflict
                enqueue(w0, ci)
                i += 1
        return None

    def analyze(confl: int) -> tuple[list[int], int]:
        # First-UIP learning by resolving backwards along the trail.
        learnt: list[int] = []
        seen = [False] * (num_vars + 1)
        counter = 0
        cur = len(trail_lim)
        idx = len(trail) - 1
        cl = work[confl]
        p = None
        while True:
            for q in cl:
                if q == p:
                    continue
                var = abs(q)
                if not seen[var] and level[var] > 0:
                    seen[var] = True
                    if level[var] == cur:
                        counter += 1
                    else:
                        learnt.append(q)
            while not seen[abs(trail[idx])]:
                idx -= 1
            p_lit = trail[idx]
            var = abs(p_lit)
            seen[var] = False
            counter -= 1
            idx -= 1
            if counter == 0:
                learnt.insert(0, -p_lit)
                break
            cl = work[reason[var]]
            p = p_lit
        if len(learnt) == 1:
            return learnt, 0
        back = max(level[abs(q)] for q in learnt[1:])
        for j in range(1, len(learnt)):
            if level[abs(learnt[j])] == back:
                learnt[1], learnt[j] = learnt[j], learnt[1]
                break
        return learnt, back

    def cancel_until(lvl: int):
        nonlocal qhead
        if len(trail_lim) <= lvl:
            return
        lim = trail_lim[lvl]
        for lit in trail[lim:]:
            assign[abs(lit)] = 0
        del trail[lim:]
        del trail_lim[lvl:]
        qhead = len(trail)

    for lit in root_lits:
        v = value(lit)
        if v == -1:
            return None
        if v == 0:
            enqueue(lit, None)

    order = list(range(1, num_vars + 1))
    rng.shuffle(order)
    phase = [rng.getrandbits(1) for _ in range(num_vars + 1)]
    order_head = 0
    conflicts = 0
    restart_at = _RESTART_BASE

    while True:
        confl = propagate()
        if confl is not None:
            if not trail_lim:
                return None
            conflicts += 1
            learnt, back = analyze(confl)
            cancel_until(back)
            order_head = 0
            work.append(learnt)
            ci = len(work) - 1
            if len(learnt) > 1:
                attach(ci)
                enqueue(learnt[0], ci)
            else:
                enqueue(learnt[0], None)
            if conflicts >= restart_at:
                restart_at = int(restart_at * _RESTART_GROWTH) + conflicts
                cancel_until(0)
                order_head = 0
                rng.shuffle(order)
                phase = [rng.getrandbits(1) for _ in range(num_vars + 1)]
            continue
        if len(trail) == num_vars:
            bits = 0
            for v in range(1, num_vars + 1):
                if assign[v] == 1:
                    bits |= 1 << (v - 1)
            return bits
        while assign[order[order_head]] != 0:
            order_head += 1
        var = order[order_head]
        trail_lim.append(len(trail))
        enqueue(var if phase[var] else -var, None)


# --------------------------------------------------------------------------
# Backends
# --------------------------------------------------------------------------


class SolverBackend:
    """Counts generate/repair/verify calls; subclasses provide the solving."""

    kind = "abstract"

    def __init__(self, seed: int = 0):
        self.seed = seed
        self.counters = CallCounters()

    def _solve(self, f: CnfFormula, fixed, extra_clauses) -> Assignment | None:
        raise NotImplementedError

    def _timed(self, f, fixed, extra_clauses, calls_attr, time_attr):
        t0 = time.perf_counter()
        try:
            return self._solve(f, fixed, extra_clauses)
        finally:
            c = self.counters
            setattr(c, calls_attr, getattr(c, calls_attr) + 1)
            setattr(c, time_attr, getattr(c, time_attr) + time.perf_counter() - t0)

    def generate(self, f: CnfFormula, extra_clauses=()) -> Assignment | None:
        return self._timed(f, None, extra_clauses, "generate_calls", "generate_time_s")

    def repair(self, f: CnfFormula, fixed: PartialAssignment) -> Assignment | None:
        return self._timed(f, fixed, (), "repair_calls", "repair_time_s")

    def verify(self, f: CnfFormula, a: Assignment) -> bool:
        t0 = time.perf_counter()
        try:
            return evaluate(f, a)
        finally:
            self.counters.verify_calls += 1
            self.counters.verify_time_s += time.perf_counter() - t0

    def generate_distinct(
        self, f: CnfFormula, n: int, deadline: float | None = None
    ) -> list[Assignment]:
        """Up to n pairwise-distinct models, distinctness via blocking clauses.

        An unsatisfiable formula raises; running out of models below n does
        not (callers see the shortfall in the returned length). deadline is
        an absolute time.monotonic() cutoff checked between solver calls.
        """
        if n < 1:
            raise ValueError("n must be >= 1")
        found: list[Assignment] = []
        blocked: list[list[int]] = []
        while len(found) < n:
            if deadline is not None and time.monotonic() >= deadline and found:
                break
            model = self.generate(f, tuple(blocked))
            if model is None:
                if not found:
                    raise UnsatFormulaError("no solutions")
                break
            found.append(model)
            blocked.append(blocking_clause(model))
        return found


class InternalBackend(SolverBackend):
    kind = "internal"

    def __init__(self, seed: int = 0):
        super().__init__(seed)
        self._rng = random.Random(seed)

    def _solve(self, f, fixed, extra_clauses):
        clauses = [list(c) for c in f.clauses]
        clauses.extend(list(c) for c in extra_clauses)
        fixed_lits = tuple(fixed.fixed_literals()) if fixed is not None else ()
        bits = _cdcl(f.num_vars, clauses, self._rng, fixed_lits)
        return None if bits is None else Assignment(f.num_vars, bits)


class ExternalBackend(SolverBackend):
    """Runs a SAT-competition-style solver command on a temp DIMACS file.

    Fixed bits are encoded as appended unit clauses; blocking clauses are
    appended verbatim. Every claimed model is re-verified before return.
    The temp directory honors the SNAPSAT_TMPDIR environment variable.
    """

    kind = "external"

    def __init__(self, cmd: str, seed: int = 0, timeout_s: float | None = None):
        super().__init__(seed)
        self.cmd = cmd
        self.timeout_s = timeout_s

    def _solve(self, f, fixed, extra_clauses):
        return external_solve_adapter(
            f, fixed, self.cmd, timeout_s=self.timeout_s, extra_clauses=extra_clauses
        )


def make_backend(selector: str, seed: int = 0) -> SolverBackend:
    """Build a backend from a CLI selector: 'internal' or 'external:<cmd>'."""
    if selector == "internal":
        return InternalBackend(seed)
    if selector.startswith("external:"):
        cmd = selector[len("external:") :]
        if not cmd:
            raise ValueError("external solver selector has empty command")
        return ExternalBackend(cmd, seed)
    raise ValueError(f"unknown solver selector {selector!r}")


# --------------------------------------------------------------------------
# One-shot functional surface
# --------------------------------------------------------------------------


def solve(
    f: CnfFormula, fixed: PartialAssignment | None = None, seed: int = 0
) -> Assignment | None:
    """Single internal solve; returns a model or None for UNSAT."""
    backend = InternalBackend(seed)
    return backend._solve(f, fixed, ())


def generate_distinct(f: CnfFormula, n: int, seed: int = 0) -> list[Assignment]:
    return InternalBackend(seed).generate_distinct(f, n)


def external_solve_adapter(
    f: CnfFormula,
    fixed: PartialAssignment | None,
    cmd: str,
    timeout_s: float | None = None,
    extra_clauses=(),
) -> Assignment | None:
    """Run cmd on a DIMACS dump of f (+units for fixed bits) and parse a model.

    cmd may contain a {path} placeholder; otherwise the file path is appended
    as the last argument. Output must contain an 's SATISFIABLE' or
    's UNSATISFIABLE' line, with 'v ' value lines for the model.
    """
    lines = [c for c in f.clauses]
    lines.extend(tuple(c) for c in extra_clauses)
    units = []
    if fixed is not None:
        units = [(lit,) for lit in fixed.fixed_literals()]
    total = len(lines) + len(units)
    text = [f"p cnf {f.num_vars} {total}"]
    for cl in lines:
        text.append(" ".join(str(lit) for lit in cl) + " 0")
    for (lit,) in units:
        text.append(f"{lit} 0")
    dimacs = "\n".join(text) + "\n"

    tmpdir = os.environ.get("SNAPSAT_TMPDIR") or None
    fd, path = tempfile.mkstemp(suffix=".cnf", prefix="snapsat_", dir=tmpdir)
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(dimacs)
        argv = shlex.split(cmd)
        if any("{path}" in a for a in argv):
            argv = [a.replace("{path}", path) for a in argv]
        else:
            argv.append(path)
        try:
            proc = subprocess.run(
                argv, capture_output=True, text=True, timeout=timeout_s
            )
        except subprocess.TimeoutExpired as e:
            raise SolverTimeoutError(f"external solver timed out after {timeout_s}s") from e
        except OSError as e:
            raise SolverProcessError(f"failed to run external solver: {e}") from e
    finally:
        try:
            os.unlink(path)
        except OSError:
            pass

    verdict = None
    values: list[int] = []
    for line in proc.stdout.splitlines():
        line = line.strip()
        if line.startswith("s "):
            verdict = line[2:].strip()
        elif line.startswith("v ") or line == "v":
            for tok in line[1:].split():
                values.append(int(tok))
    if verdict is None:
        if proc.returncode != 0:
            raise SolverProcessError(
                f"external solver exited {proc.returncode} without a verdict"
            )
        raise SolverOutputError("no 's' verdict line in external solver output")
    if verdict == "UNSATISFIABLE":
        return None
    if verdict != "SATISFIABLE":
        raise SolverOutputError(f"unrecognized verdict {verdict!r}")

    bits = 0
    seen = [False] * (f.num_vars + 1)
    for lit in values:
        if lit == 0:
            continue
        var = abs(lit)
        if var > f.num_vars:
            raise SolverOutputError(f"model literal {lit} out of range")
        seen[var] = True
        if lit > 0:
            bits |= 1 << (var - 1)
    if not all(seen[1:]):
        missing = next(v for v in range(1, f.num_vars + 1) if not seen[v])
        raise SolverOutputError(f"model missing variable {missing}")
    model = Assignment(f.num_vars, bits)
    if not evaluate(f, model):
        raise SolverInconsistencyError("external solver inconsistency: model invalid")
    if fixed is not None and (model.bits ^ fixed.bits) & fixed.mask:
        raise SolverInconsistencyError(
            "external solver inconsistency: model violates fixed bits"
        )
    for cl in extra_clauses:
        if not any(
            (lit > 0) == bool(model.bits >> (abs(lit) - 1) & 1) for lit in cl
        ):
            raise SolverInconsistencyError(
                "external solver inconsistency: model violates added clause"
            )
    return model

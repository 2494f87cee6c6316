"""The sampling engine: cluster valid tests, mutate centroids along
frequency-weighted deltas, verify everything, repair what fails.

One run: seed the suite with distinct solver models, then loop - build the
delta pool, k-means the samples, XOR each binarized centroid with the OR
of two weighted-random deltas, verify the candidate, repair failures by
fixing the mutated bits and re-solving the rest. Repaired tests feed back
into the samples; the loop stops when suite diversity stops improving or
the time budget runs out.
"""

from __future__ import annotations

import json
import random
import time
from dataclasses import asdict, dataclass, field

from .cluster import kmeans
from .cnf import Assignment, CnfFormula, PartialAssignment, evaluate
from .deltas import Delta, build_pool, sample_delta
from .metrics import suite_ncd
from .solver import SolverBackend, make_backend

DEFAULT_TIME_BUDGET_S = 600.0

ORIGIN_INITIAL = "initial"
ORIGIN_MUTATED_VALID = "mutated-valid"
ORIGIN_REPAIRED = "repaired"


@dataclass
class RunConfig:
    n_init: int = 100
    k: int = 5
    improve_threshold: float = 0.05
    time_budget_s: float = DEFAULT_TIME_BUDGET_S
    mutations_per_centroid: int | None = None  # None = n_init
    seed: int = 0
    solver: str = "internal"
    ncd_subsample_cap: int = 500

    def __post_init__(self):
        if self.n_init < 1 or self.k < 1 or self.ncd_subsample_cap < 1:
            raise ValueError("n_init, k, and ncd_subsample_cap must be positive")
        if not 0.0 < self.improve_threshold < 1.0:
            raise ValueError("improve_threshold must be in (0, 1)")
        if self.time_budget_s <= 0:
            raise ValueError("time_budget_s must be positive")
        if self.mutations_per_centroid is not None and self.mutations_per_centroid < 1:
            raise ValueError("mutations_per_centroid must be positive")

    @property
    def mutations(self) -> int:
        return self.mutations_per_centroid or self.n_init


class Suite:
    """Insertion-ordered set of distinct valid assignments with origin tags."""

    def __init__(self):
        self.tests: list[Assignment] = []
        self.origins: list[str] = []
        self._seen: set[Assignment] = set()

    def add(self, a: Assignment, origin: str) -> bool:
        if a in self._seen:
            return False
        self._seen.add(a)
        self.tests.append(a)
        self.origins.append(origin)
        return True

    def __len__(self) -> int:
        return len(self.tests)

    def __contains__(self, a: Assignment) -> bool:
        return a in self._seen

    def __iter__(self):
        return iter(self.tests)

    def validate(self, f: CnfFormula) -> list[int]:
        """Indices of invalid tests (empty list = all valid)."""
        return [i for i, a in enumerate(self.tests) if not evaluate(f, a)]

    def to_text(self, seed: int) -> str:
        n = self.tests[0].n if self.tests else 0
        lines = [f"c snap suite v1 vars={n} tests={len(self.tests)} seed={seed}"]
        lines.extend(a.to01() for a in self.tests)
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> tuple[Suite, dict]:
        lines = text.splitlines()
        if not lines or not lines[0].startswith("c snap suite v1"):
            raise ValueError("not a snap suite file (missing 'c snap suite v1' header)")
        meta = {}
        for tok in lines[0].split()[4:]:
            key, _, val = tok.partition("=")
            meta[key] = int(val)
        suite = cls()
        for i, row in enumerate(lines[1:], start=2):
            row = row.strip()
            if not row:
                continue
            a = Assignment.from01(row)
            if "vars" in meta and a.n != meta["vars"]:
                raise ValueError(f"line {i}: row length {a.n} != vars={meta['vars']}")
            suite.add(a, "loaded")
        if "tests" in meta and len(suite.tests) != meta["tests"]:
            raise ValueError(
                f"suite has {len(suite.tests)} rows, header says tests={meta['tests']}"
            )
        return suite, meta


@dataclass
class RunStats:
    engine: str = "snap"
    seed: int = 0
    wall_time_s: float = 0.0
    generate_calls: int = 0
    verify_calls: int = 0
    repair_calls: int = 0
    generate_time_s: float = 0.0
    verify_time_s: float = 0.0
    repair_time_s: float = 0.0
    candidates_proposed: int = 0
    valid_on_first_verify: int = 0
    repair_successes: int = 0
    repair_failures: int = 0
    ncd_history: list[float] = field(default_factory=list)
    ncd_subsampled: bool = False
    suite_size: int = 0
    initial_samples: int = 0
    outer_iterations: int = 0
    stop_reason: str = ""

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True) + "\n"


def mutate(c: Assignment, delta_i: Delta, delta_j: Delta) -> tuple[Assignment, Delta]:
    """New candidate and its mutation mask: flip c wherever either delta is set."""
    mask = delta_i | delta_j
    return c ^ mask, mask


def repair(
    f: CnfFormula, candidate: Assignment, mask: Delta, backend: SolverBackend
) -> Assignment | None:
    """Complete an invalid candidate into a model, keeping all mutated bits.

    The mutated (mask=1) positions hold the values the mutation chose on
    purpose; everything else is freed for the solver to fill. Returns None
    when no model agrees with the fixed bits (the candidate is unrepairable).
    """
    fixed = PartialAssignment.fix(candidate, mask)
    result = backend.repair(f, fixed)
    if result is not None and (result.bits ^ candidate.bits) & mask.bits:
        raise AssertionError("solver returned a model that changed fixed bits")
    return result


def should_continue(ncd_history: list[float], elapsed_s: float, cfg: RunConfig) -> bool:
    """Keep looping while inside the budget and diversity keeps improving."""
    if elapsed_s >= cfg.time_budget_s:
        return False
    if len(ncd_history) < 2:
        return True
    prev, last = ncd_history[-2], ncd_history[-1]
    if prev <= 0.0:
        return False
    return (last - prev) / prev >= cfg.improve_threshold


def run(f: CnfFormula, cfg: RunConfig) -> tuple[Suite, RunStats]:
    """Full sampling run; raises UnsatFormulaError on unsatisfiable input."""
    t0 = time.monotonic()
    deadline = t0 + cfg.time_budget_s
    master = random.Random(cfg.seed)
    solver_seed = master.getrandbits(64)
    delta_rng = random.Random(master.getrandbits(64))
    kmeans_base = master.getrandbits(32)
    ncd_base = master.getrandbits(32)

    backend = make_backend(cfg.solver, solver_seed)
    stats = RunStats(engine="snap", seed=cfg.seed)
    suite = Suite()

    samples = backend.generate_distinct(f, cfg.n_init, deadline=deadline)
    stats.initial_samples = len(samples)
    sample_set = set(samples)
    for a in samples:
        suite.add(a, ORIGIN_INITIAL)

    stats.stop_reason = "exhausted-models" if len(samples) < 2 else ""
    out_of_time = time.monotonic() >= deadline
    if out_of_time:
        stats.stop_reason = "time-budget"

    while not stats.stop_reason:
        stats.outer_iterations += 1
        pool = build_pool(samples)
        model = kmeans(samples, cfg.k, seed=kmeans_base + stats.outer_iterations)
        for centroid in model.binarized:
            for _ in range(cfg.mutations):
                if time.monotonic() >= deadline:
                    out_of_time = True
                    break
                di = sample_delta(pool, delta_rng)
                dj = sample_delta(pool, delta_rng)
                candidate, mask = mutate(centroid, di, dj)
                stats.candidates_proposed += 1
                if backend.verify(f, candidate):
                    stats.valid_on_first_verify += 1
                    suite.add(candidate, ORIGIN_MUTATED_VALID)
                    continue
                fixed_up = repair(f, candidate, mask, backend)
                if fixed_up is None:
                    stats.repair_failures += 1
                    continue
                stats.repair_successes += 1
                suite.add(fixed_up, ORIGIN_REPAIRED)
                if fixed_up not in sample_set:
                    sample_set.add(fixed_up)
                    samples.append(fixed_up)
            if out_of_time:
                break
        value, subsampled = suite_ncd(
            suite.tests,
            cap=cfg.ncd_subsample_cap,
            seed=ncd_base + stats.outer_iterations,
        )
        stats.ncd_history.append(value)
        stats.ncd_subsampled = stats.ncd_subsampled or subsampled
        if out_of_time:
            stats.stop_reason = "time-budget"
        elif not should_continue(stats.ncd_history, time.monotonic() - t0, cfg):
            stats.stop_reason = (
                "time-budget"
                if time.monotonic() - t0 >= cfg.time_budget_s
                else "ncd-plateau"
            )

    counters = backend.counters
    stats.generate_calls = counters.generate_calls
    stats.verify_calls = counters.verify_calls
    stats.repair_calls = counters.repair_calls
    stats.generate_time_s = counters.generate_time_s
    stats.verify_time_s = counters.verify_time_s
    stats.repair_time_s = counters.repair_time_s
    stats.suite_size = len(suite)
    stats.wall_time_s = time.monotonic() - t0
    return suite, stats

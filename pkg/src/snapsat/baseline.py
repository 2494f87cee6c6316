"""Comparison sampler: combine valid tests with XOR and keep what verifies.

A new candidate is d = c ^ (a ^ b) for random distinct valid a, b, c. The
original tool this mimics skipped verification for speed; here every
candidate is verified so the emitted suite is 100% valid, and the
proposed/valid counts expose how often the combination heuristic works.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass

from .cnf import CnfFormula, evaluate
from .engine import ORIGIN_INITIAL, RunStats, Suite
from .metrics import suite_ncd
from .solver import make_backend

ORIGIN_COMBINED = "combined"


@dataclass
class BaselineConfig:
    n_init: int = 100
    seed: int = 0
    time_budget_s: float = 600.0
    verify_all: bool = True
    max_proposals: int | None = None  # deterministic cap; None = run out the clock
    solver: str = "internal"
    ncd_subsample_cap: int = 500

    def __post_init__(self):
        if self.n_init < 1:
            raise ValueError("n_init must be positive")
        if self.time_budget_s <= 0:
            raise ValueError("time_budget_s must be positive")
        if self.max_proposals is not None and self.max_proposals < 0:
            raise ValueError("max_proposals must be non-negative")


def run_baseline(f: CnfFormula, cfg: BaselineConfig) -> tuple[Suite, RunStats]:
    """Seed with solver models, then XOR-combine until the budget runs out."""
    t0 = time.monotonic()
    deadline = t0 + cfg.time_budget_s
    master = random.Random(cfg.seed)
    solver_seed = master.getrandbits(64)
    pick_rng = random.Random(master.getrandbits(64))
    ncd_seed = master.getrandbits(32)

    backend = make_backend(cfg.solver, solver_seed)
    stats = RunStats(engine="baseline", seed=cfg.seed)
    suite = Suite()

    valid = backend.generate_distinct(f, cfg.n_init, deadline=deadline)
    stats.initial_samples = len(valid)
    for a in valid:
        suite.add(a, ORIGIN_INITIAL)

    stats.stop_reason = "exhausted-models" if len(valid) < 3 else ""
    while not stats.stop_reason:
        if time.monotonic() >= deadline:
            stats.stop_reason = "time-budget"
            break
        if cfg.max_proposals is not None and stats.candidates_proposed >= cfg.max_proposals:
            stats.stop_reason = "proposal-cap"
            break
        a, b, c = pick_rng.sample(valid, 3)
        d = c ^ (a ^ b)
        stats.candidates_proposed += 1
        if cfg.verify_all:
            ok = backend.verify(f, d)
        else:
            ok = evaluate(f, d)
        if ok:
            stats.valid_on_first_verify += 1
            if suite.add(d, ORIGIN_COMBINED):
                valid.append(d)

    if len(suite) >= 2:
        value, subsampled = suite_ncd(
            suite.tests, cap=cfg.ncd_subsample_cap, seed=ncd_seed
        )
        stats.ncd_history.append(value)
        stats.ncd_subsampled = subsampled

    counters = backend.counters
    stats.generate_calls = counters.generate_calls
    stats.verify_calls = counters.verify_calls
    stats.generate_time_s = counters.generate_time_s
    stats.verify_time_s = counters.verify_time_s
    stats.suite_size = len(suite)
    stats.wall_time_s = time.monotonic() - t0
    return suite, stats


def eq1_validity_probe(
    f: CnfFormula, n_valid: int, n_trials: int, seed: int = 0
) -> float:
    """Fraction of XOR-combined candidates that satisfy f.

    Draws n_valid distinct models, then n_trials random distinct (a, b, c)
    triples; reports how often c ^ (a ^ b) is valid. Needs at least three
    distinct models to form a triple.
    """
    if n_valid < 3:
        raise ValueError("n_valid must be >= 3")
    if n_trials < 1:
        raise ValueError("n_trials must be >= 1")
    master = random.Random(seed)
    backend = make_backend("internal", master.getrandbits(64))
    models = backend.generate_distinct(f, n_valid)
    if len(models) < 3:
        raise ValueError(
            f"formula has only {len(models)} distinct models; need >= 3"
        )
    rng = random.Random(master.getrandbits(64))
    valid = 0
    for _ in range(n_trials):
        a, b, c = rng.sample(models, 3)
        if evaluate(f, c ^ (a ^ b)):
            valid += 1
    return valid / n_trials

"""Planted random k-SAT generator: satisfiable by construction."""

from __future__ import annotations

import math
import random

from .cnf import Assignment, CnfFormula


def gen_planted(
    num_vars: int, clause_ratio: float, clause_width: int, seed: int = 0
) -> CnfFormula:
    """Random formula guaranteed satisfiable by a hidden planted assignment.

    Draws the planted assignment, then ceil(clause_ratio * num_vars)
    clauses of clause_width distinct variables with random signs, redrawing
    any clause the planted assignment falsifies.
    """
    if clause_width < 2:
        raise ValueError("clause_width must be >= 2")
    if clause_width > num_vars:
        raise ValueError("clause_width cannot exceed num_vars")
    if clause_ratio <= 0:
        raise ValueError("clause_ratio must be positive")
    rng = random.Random(seed)
    sigma = rng.getrandbits(num_vars)
    num_clauses = math.ceil(clause_ratio * num_vars)
    clauses = []
    for _ in range(num_clauses):
        while True:
            variables = rng.sample(range(1, num_vars + 1), clause_width)
            clause = tuple(v if rng.random() < 0.5 else -v for v in variables)
            if any((lit > 0) == bool(sigma >> (abs(lit) - 1) & 1) for lit in clause):
                clauses.append(clause)
                break
    return CnfFormula(num_vars=num_vars, clauses=tuple(clauses))


def planted_assignment(num_vars: int, seed: int = 0) -> Assignment:
    """The hidden assignment gen_planted(num_vars, ..., seed) satisfies."""
    rng = random.Random(seed)
    return Assignment(num_vars, rng.getrandbits(num_vars))

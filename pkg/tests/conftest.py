"""Shared test helpers: brute-force oracles and small formula builders.

The truth-table oracle is bit-parallel: column c holds, for every one of
the 2^n assignments, whether that assignment satisfies the formula; the
assignment with index i sets variable v to bit (i >> (v-1)) & 1, so a set
bit's index IS the model's bit pattern. Independent of the solver code.
"""

from __future__ import annotations

import random

from snapsat.cnf import Assignment, CnfFormula


def _var_column(v: int, n: int) -> int:
    # repeating blocks: 2^(v-1) zeros then 2^(v-1) ones, over 2^n entries
    half = 1 << (v - 1)
    unit = ((1 << half) - 1) << half
    col = 0
    for k in range(1 << (n - v)):
        col |= unit << (k << v)
    return col


def truth_table_models(f: CnfFormula) -> list[int]:
    """All model bit-patterns of f, by exhaustive truth table (n <= ~18)."""
    n = f.num_vars
    full = (1 << (1 << n)) - 1
    cols = {v: _var_column(v, n) for v in range(1, n + 1)}
    table = full
    for clause in f.clauses:
        cc = 0
        for lit in clause:
            cc |= cols[lit] if lit > 0 else cols[-lit] ^ full
        table &= cc
        if not table:
            return []
    models = []
    while table:
        low = table & -table
        models.append(low.bit_length() - 1)
        table ^= low
    return models


def truth_table_sat(f: CnfFormula) -> bool:
    n = f.num_vars
    full = (1 << (1 << n)) - 1
    cols = {v: _var_column(v, n) for v in range(1, n + 1)}
    table = full
    for clause in f.clauses:
        cc = 0
        for lit in clause:
            cc |= cols[lit] if lit > 0 else cols[-lit] ^ full
        table &= cc
        if not table:
            return False
    return True


def random_formula(rng: random.Random, max_vars: int = 12) -> CnfFormula:
    """Random small CNF, mixed SAT/UNSAT across draws."""
    n = rng.randint(3, max_vars)
    m = rng.randint(1, int(4.6 * n))
    clauses = []
    for _ in range(m):
        width = rng.randint(1, min(3, n))
        variables = rng.sample(range(1, n + 1), width)
        clauses.append(tuple(v if rng.random() < 0.5 else -v for v in variables))
    return CnfFormula(num_vars=n, clauses=tuple(clauses))


def parity_formula(num_vars: int, groups: list[tuple[list[int], int]]) -> CnfFormula:
    """CNF encoding of XOR constraints: each (vars, parity) group demands
    vars' values XOR to parity. Models of any such formula form an affine
    space over GF(2)."""
    clauses = []
    for variables, parity in groups:
        k = len(variables)
        for pattern in range(1 << k):
            bits = [(pattern >> i) & 1 for i in range(k)]
            if sum(bits) % 2 != parity:
                # forbid this falsifying pattern
                clauses.append(
                    tuple(
                        -v if bit else v for v, bit in zip(variables, bits)
                    )
                )
    return CnfFormula(num_vars=num_vars, clauses=tuple(clauses))


def assignment(text: str) -> Assignment:
    return Assignment.from01(text)

"""snapsat: small, 100%-valid, diverse test suites for CNF constraint models.

Seeds a suite with solver models, clusters them, and mutates cluster
centroids along frequency-weighted XOR deltas; invalid candidates are
repaired by re-solving with the mutated bits pinned. Includes an
XOR-combination baseline sampler and a benchmark harness.
"""

from .baseline import BaselineConfig, eq1_validity_probe, run_baseline
from .cluster import ClusterModel, binarize_centroid, kmeans
from .cnf import (
    Assignment,
    CnfFormula,
    DimacsParseError,
    PartialAssignment,
    evaluate,
    falsified_clauses,
    parse_dimacs,
    parse_dimacs_file,
)
from .deltas import Delta, DeltaPool, build_pool, identical_delta_count, sample_delta, xor
from .engine import RunConfig, RunStats, Suite, mutate, repair, run, should_continue
from .metrics import compressed_len, entropy, entropy_histogram, ncd, suite_ncd
from .planted import gen_planted, planted_assignment
from .solver import (
    ExternalBackend,
    ExternalSolverError,
    InternalBackend,
    SolverBackend,
    UnsatFormulaError,
    external_solve_adapter,
    generate_distinct,
    make_backend,
    solve,
)

__version__ = "0.1.0"

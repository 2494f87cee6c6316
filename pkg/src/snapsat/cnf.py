"""CNF formulas, bit-vector assignments, and clause evaluation.

Variables are 1-based in DIMACS and in clause literals; internally bit i-1
of an assignment holds variable i. Evaluation is the cheap check used to
vet every candidate test, so clause masks are precomputed once per formula.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property


class DimacsParseError(ValueError):
    """Malformed DIMACS input; message names the offending line."""


@dataclass(frozen=True)
class Assignment:
    """Immutable bit vector over a formula's variables (bit i-1 = variable i)."""

    n: int
    bits: int

    def __post_init__(self):
        if self.n < 0 or self.bits < 0 or self.bits >> self.n:
            raise ValueError(f"bits out of range for {self.n} variables")

    @classmethod
    def from_bools(cls, values) -> Assignment:
        bits = 0
        for i, v in enumerate(values):
            if v:
                bits |= 1 << i
        return cls(len(values), bits)

    @classmethod
    def from01(cls, text: str) -> Assignment:
        """Parse a '0'/'1' row, variable 1 leftmost."""
        bits = 0
        for i, ch in enumerate(text):
            if ch == "1":
                bits |= 1 << i
            elif ch != "0":
                raise ValueError(f"invalid character {ch!r} in assignment row")
        return cls(len(text), bits)

    def to01(self) -> str:
        """Render as a '0'/'1' row, variable 1 leftmost."""
        return "".join("1" if self.bits >> i & 1 else "0" for i in range(self.n))

    def get(self, var: int) -> bool:
        """Truth value of 1-based variable var."""
        if not 1 <= var <= self.n:
            raise IndexError(f"variable {var} out of range 1..{self.n}")
        return bool(self.bits >> (var - 1) & 1)

    def ones(self) -> int:
        return self.bits.bit_count()

    def complement(self) -> Assignment:
        return Assignment(self.n, self.bits ^ ((1 << self.n) - 1))

    def _check_len(self, other: Assignment):
        if self.n != other.n:
            raise ValueError(f"length mismatch: {self.n} vs {other.n}")

    def __xor__(self, other: Assignment) -> Assignment:
        self._check_len(other)
        return Assignment(self.n, self.bits ^ other.bits)

    def __or__(self, other: Assignment) -> Assignment:
        self._check_len(other)
        return Assignment(self.n, self.bits | other.bits)

    def __and__(self, other: Assignment) -> Assignment:
        self._check_len(other)
        return Assignment(self.n, self.bits & other.bits)


@dataclass(frozen=True)
class PartialAssignment:
    """Assignment with a fixed-bit mask: mask bit 1 = fixed, 0 = free.

    Bits at free positions are ignored by every consumer.
    """

    n: int
    bits: int
    mask: int

    def __post_init__(self):
        if self.bits >> self.n or self.mask >> self.n:
            raise ValueError(f"bits/mask out of range for {self.n} variables")

    @classmethod
    def fix(cls, a: Assignment, mask: Assignment) -> PartialAssignment:
        """Fix a's values wherever mask is 1, leave the rest free."""
        if a.n != mask.n:
            raise ValueError(f"length mismatch: {a.n} vs {mask.n}")
        return cls(a.n, a.bits & mask.bits, mask.bits)

    def fixed_literals(self):
        """Yield the fixed positions as signed 1-based literals."""
        for i in range(self.n):
            if self.mask >> i & 1:
                yield (i + 1) if self.bits >> i & 1 else -(i + 1)


@dataclass(frozen=True)
class CnfFormula:
    """Immutable clause database.

    clauses holds signed 1-based literals; tautologies are dropped at parse
    time (counted) and duplicate literals within a clause are removed.
    """

    num_vars: int
    clauses: tuple[tuple[int, ...], ...]
    tautologies_dropped: int = 0
    header_clauses: int | None = None

    def __post_init__(self):
        for cl in self.clauses:
            if not cl:
                raise ValueError("empty clause")
            for lit in cl:
                if lit == 0 or abs(lit) > self.num_vars:
                    raise ValueError(f"literal {lit} out of range 1..{self.num_vars}")

    @property
    def num_clauses(self) -> int:
        return len(self.clauses)

    @cached_property
    def _clause_masks(self) -> tuple[tuple[int, int], ...]:
        # per clause: (positive-literal bit mask, negative-literal bit mask)
        masks = []
        for cl in self.clauses:
            pos = neg = 0
            for lit in cl:
                if lit > 0:
                    pos |= 1 << (lit - 1)
                else:
                    neg |= 1 << (-lit - 1)
            masks.append((pos, neg))
        return tuple(masks)

    @cached_property
    def _full_mask(self) -> int:
        return (1 << self.num_vars) - 1

    def to_dimacs(self) -> str:
        lines = [f"p cnf {self.num_vars} {len(self.clauses)}"]
        for cl in self.clauses:
            lines.append(" ".join(str(lit) for lit in cl) + " 0")
        return "\n".join(lines) + "\n"


def evaluate(f: CnfFormula, a: Assignment) -> bool:
    """True iff every clause has at least one satisfied literal."""
    if a.n != f.num_vars:
        raise ValueError(f"assignment length {a.n} != num_vars {f.num_vars}")
    bits = a.bits
    inv = bits ^ f._full_mask
    for pos, neg in f._clause_masks:
        if not (bits & pos) and not (inv & neg):
            return False
    return True


def falsified_clauses(f: CnfFormula, a: Assignment) -> list[int]:
    """0-based indices of the clauses a fails to satisfy."""
    if a.n != f.num_vars:
        raise ValueError(f"assignment length {a.n} != num_vars {f.num_vars}")
    bits = a.bits
    inv = bits ^ f._full_mask
    return [
        i
        for i, (pos, neg) in enumerate(f._clause_masks)
        if not (bits & pos) and not (inv & neg)
    ]


def parse_dimacs(text: str | bytes) -> CnfFormula:
    """Parse DIMACS CNF text.

    Accepts comment lines, one `p cnf` header, and whitespace-separated
    clauses terminated by 0 (clauses may span lines). A '%' line ends the
    input (common trailer in benchmark files). Tautological clauses are
    dropped and counted; duplicate literals are removed.
    """
    if isinstance(text, bytes):
        text = text.decode("ascii", errors="replace")

    num_vars = None
    header_clauses = None
    clauses: list[tuple[int, ...]] = []
    tautologies = 0
    current: list[int] = []
    current_line = None  # line where the open clause started

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("%"):
            break
        if line.startswith("p"):
            if num_vars is not None:
                raise DimacsParseError(f"line {lineno}: duplicate header")
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise DimacsParseError(f"line {lineno}: malformed header {line!r}")
            try:
                num_vars, header_clauses = int(parts[2]), int(parts[3])
            except ValueError:
                raise DimacsParseError(f"line {lineno}: malformed header {line!r}")
            if num_vars < 1:
                raise DimacsParseError(f"line {lineno}: non-positive variable count")
            continue
        if num_vars is None:
            raise DimacsParseError(f"line {lineno}: clause before 'p cnf' header")
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise DimacsParseError(f"line {lineno}: bad literal {tok!r}")
            if lit == 0:
                if not current:
                    raise DimacsParseError(f"line {lineno}: empty clause")
                seen = set(current)
                if any(-l in seen for l in current):
                    tautologies += 1
                else:
                    clauses.append(tuple(dict.fromkeys(current)))
                current = []
                current_line = None
            else:
                if abs(lit) > num_vars:
                    raise DimacsParseError(
                        f"line {lineno}: literal {lit} out of range 1..{num_vars}"
                    )
                if not current:
                    current_line = lineno
                current.append(lit)

    if num_vars is None:
        raise DimacsParseError("missing 'p cnf' header")
    if current:
        raise DimacsParseError(
            f"line {current_line}: clause not 0-terminated at end of input"
        )
    return CnfFormula(
        num_vars=num_vars,
        clauses=tuple(clauses),
        tautologies_dropped=tautologies,
        header_clauses=header_clauses,
    )


def parse_dimacs_file(path) -> CnfFormula:
    with open(path, "rb") as fh:
        return parse_dimacs(fh.read())

"""Frequency-weighted pool of XOR deltas between valid samples.

Deltas that repeat across sample pairs mark the repeated structure worth
mutating along, so sampling is weighted by occurrence count. The pool is
built over unordered distinct pairs; self-pairs would only contribute
all-zero deltas and ordered duplicates only double every weight.
"""

from __future__ import annotations

import random
from bisect import bisect_right
from dataclasses import dataclass
from itertools import accumulate

from .cnf import Assignment

Delta = Assignment


def xor(a: Assignment, b: Assignment) -> Delta:
    """Bitwise difference of two assignments."""
    return a ^ b


@dataclass(frozen=True)
class DeltaPool:
    """Distinct delta patterns with occurrence weights."""

    entries: dict[Delta, int]
    total_weight: int

    def __post_init__(self):
        object.__setattr__(self, "_patterns", tuple(self.entries))
        object.__setattr__(
            self, "_cum", tuple(accumulate(self.entries[p] for p in self._patterns))
        )

    def __eq__(self, other):
        if not isinstance(other, DeltaPool):
            return NotImplemented
        return self.entries == other.entries

    def __len__(self) -> int:
        return len(self.entries)


def build_pool(samples: list[Assignment]) -> DeltaPool:
    """Deltas of all unordered pairs of distinct samples, weighted by repeats."""
    if len(samples) < 2:
        raise ValueError("need at least 2 samples to build a delta pool")
    entries: dict[Delta, int] = {}
    total = 0
    for i in range(len(samples)):
        ai = samples[i]
        for j in range(i + 1, len(samples)):
            d = ai ^ samples[j]
            if d.bits == 0:
                raise ValueError("samples must be pairwise distinct")
            entries[d] = entries.get(d, 0) + 1
            total += 1
    return DeltaPool(entries=entries, total_weight=total)


def sample_delta(pool: DeltaPool, rng: random.Random) -> Delta:
    """Draw one delta with probability weight/total_weight."""
    if pool.total_weight == 0:
        raise ValueError("empty delta pool")
    x = rng.random() * pool.total_weight
    idx = bisect_right(pool._cum, x)
    if idx == len(pool._patterns):  # guard the x == total edge
        idx -= 1
    return pool._patterns[idx]


def identical_delta_count(samples: list[Assignment]) -> dict[Delta, int]:
    """Multiplicity of each distinct delta pattern over all sample pairs."""
    return build_pool(samples).entries

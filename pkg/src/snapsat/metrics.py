"""Suite diversity metrics: compression-based distance and bit entropy.

The compressed-length proxy C(x) is a DEFLATE stream at fixed level 6
inside a gzip container with mtime pinned to 0, so output bytes carry no
timestamps and C is deterministic. The container's fixed per-stream
overhead is part of the metric (single rows are tiny; a headerless stream
makes the normalization degenerate enough to invert the improvement
ordering on small suites).
"""

from __future__ import annotations

import gzip
import io
import math
import random

from .cnf import Assignment

COMPRESS_LEVEL = 6


def compressed_len(data: bytes) -> int:
    """C(x): byte length of the deterministic compression of x."""
    buf = io.BytesIO()
    with gzip.GzipFile(
        fileobj=buf, mode="wb", compresslevel=COMPRESS_LEVEL, mtime=0
    ) as fh:
        fh.write(data)
    return len(buf.getvalue())


def _rows(x) -> list[bytes]:
    rows = []
    for item in x:
        if isinstance(item, Assignment):
            rows.append(item.to01().encode("ascii") + b"\n")
        elif isinstance(item, bytes):
            rows.append(item if item.endswith(b"\n") else item + b"\n")
        else:
            rows.append(str(item).encode("ascii") + b"\n")
    return rows


def ncd(x) -> float:
    """Normalized compression distance of a suite.

    Each test is one ASCII 0/1 row ending in a newline; the suite
    concatenation keeps suite order. Higher means more diverse:

        (C(all rows) - min C(row)) / max C(all rows minus one)
    """
    rows = _rows(x)
    if len(rows) < 2:
        raise ValueError("ncd needs at least 2 tests")
    c_all = compressed_len(b"".join(rows))
    c_min = min(compressed_len(r) for r in rows)
    c_max = max(
        compressed_len(b"".join(rows[:i] + rows[i + 1 :])) for i in range(len(rows))
    )
    return (c_all - c_min) / c_max


def suite_ncd(x, cap: int | None = None, seed: int = 0) -> tuple[float, bool]:
    """ncd with a seeded uniform subsample above cap rows.

    Returns (value, subsampled); the leave-one-out maximum in ncd costs one
    near-full compression per row, so large suites are capped. Subsampling
    preserves suite order.
    """
    items = list(x)
    if cap is not None and len(items) > cap:
        idx = sorted(random.Random(seed).sample(range(len(items)), cap))
        return ncd([items[i] for i in idx]), True
    return ncd(items), False


def entropy(a: Assignment) -> float:
    """Shannon entropy of the fraction p of 1-bits: -p*log2(p)-(1-p)*log2(1-p)."""
    if a.n < 1:
        raise ValueError("entropy needs at least one variable")
    p = a.ones() / a.n
    if p == 0.0 or p == 1.0:
        return 0.0
    return -p * math.log2(p) - (1.0 - p) * math.log2(1.0 - p)


def entropy_histogram(suite, bins: int = 10) -> list[tuple[float, float, float]]:
    """Bucket suite members by entropy over [0, 1].

    Returns (bucket_low, bucket_high, percent) rows; percents sum to 100.
    Entropy exactly 1.0 lands in the last bucket.
    """
    tests = list(suite)
    if not tests:
        raise ValueError("empty suite")
    if bins < 1:
        raise ValueError("bins must be >= 1")
    counts = [0] * bins
    for a in tests:
        h = entropy(a)
        idx = min(int(h * bins), bins - 1)
        counts[idx] += 1
    total = len(tests)
    return [
        (i / bins, (i + 1) / bins, 100.0 * counts[i] / total) for i in range(bins)
    ]

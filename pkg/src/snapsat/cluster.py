"""Lloyd's k-means over binary assignments with majority-vote binarization.

Squared Euclidean distance on 0/1 coordinates coincides with Hamming
distance when centroids are binary; real-valued centroids appear only
inside the iteration. Mutation needs bit vectors, so each final centroid
is binarized by per-bit majority (ties go to 0).
"""

from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np

from .cnf import Assignment

MAX_ITERATIONS = 50


@dataclass
class ClusterModel:
    k: int
    assignments_index: list[int]  # cluster id per input sample
    centroids: np.ndarray  # (k, num_vars) float64 in [0, 1]
    binarized: list[Assignment]
    inertia_history: list[float]  # within-cluster squared distance per iteration


def binarize_centroid(members: list[Assignment]) -> Assignment:
    """Per-bit majority vote over the members; an exact tie yields 0."""
    if not members:
        raise ValueError("empty cluster")
    n = members[0].n
    m = len(members)
    bits = 0
    for i in range(n):
        ones = sum(1 for a in members if a.bits >> i & 1)
        if 2 * ones > m:
            bits |= 1 << i
    return Assignment(n, bits)


def _to_matrix(samples: list[Assignment]) -> np.ndarray:
    n = samples[0].n
    mat = np.zeros((len(samples), n), dtype=np.float64)
    for r, a in enumerate(samples):
        bits = a.bits
        for i in range(n):
            if bits >> i & 1:
                mat[r, i] = 1.0
    return mat


def kmeans(samples: list[Assignment], k: int, seed: int = 0) -> ClusterModel:
    """Cluster samples into (at most) k groups.

    Initial centroids are k distinct samples chosen by the seeded rng; k is
    lowered to len(samples) when there are fewer samples than clusters. An
    emptied cluster is re-seeded with the sample farthest from its current
    centroid, which keeps every cluster non-empty and the total
    within-cluster squared distance non-increasing.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if not samples:
        raise ValueError("no samples to cluster")
    m = len(samples)
    k = min(k, m)
    rng = random.Random(seed)
    x = _to_matrix(samples)
    centroids = x[rng.sample(range(m), k)].copy()

    labels = np.full(m, -1, dtype=np.int64)
    inertia_history: list[float] = []
    for _ in range(MAX_ITERATIONS):
        # squared distances via ||x||^2 - 2 x.c + ||c||^2
        d2 = (
            (x * x).sum(axis=1)[:, None]
            - 2.0 * (x @ centroids.T)
            + (centroids * centroids).sum(axis=1)[None, :]
        )
        new_labels = d2.argmin(axis=1)
        # re-seed emptied clusters; a re-seed may empty a singleton, so loop
        empty = [cid for cid in range(k) if not (new_labels == cid).any()]
        while empty:
            cid = empty[0]
            row_d = d2[np.arange(m), new_labels]
            far = int(row_d.argmax())
            centroids[cid] = x[far]
            d2[:, cid] = ((x - x[far]) ** 2).sum(axis=1)
            new_labels = d2.argmin(axis=1)
            empty = [cid for cid in range(k) if not (new_labels == cid).any()]
        inertia = float(d2[np.arange(m), new_labels].sum())
        if inertia_history:
            assert inertia <= inertia_history[-1] * (1 + 1e-12) + 1e-9
        inertia_history.append(inertia)
        if (new_labels == labels).all():
            break
        labels = new_labels
        for cid in range(k):
            centroids[cid] = x[labels == cid].mean(axis=0)

    members = [[] for _ in range(k)]
    for idx, cid in enumerate(labels):
        members[int(cid)].append(samples[idx])
    binarized = [binarize_centroid(ms) for ms in members]
    return ClusterModel(
        k=k,
        assignments_index=[int(c) for c in labels],
        centroids=centroids,
        binarized=binarized,
        inertia_history=inertia_history,
    )

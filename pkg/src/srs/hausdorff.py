"""Hausdorff distances between finite point sets.

The exact variant works in an arbitrary norm that dominates the Euclidean
norm (the adapted norm does): a KD-tree in Euclidean distance proposes
candidates and the exact squared norm decides.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np
from scipy.spatial import cKDTree


def _to_float(points) -> np.ndarray:
    return np.array([[float(c) for c in p] for p in points], dtype=float).reshape(len(points), -1)


def directed_sq(a: Sequence, b: Sequence, norm_sq: Callable) -> Fraction:
    """max_{p in a} min_{q in b} ||p - q||^2, exactly.

    ``norm_sq`` maps a rational vector to its exact squared norm and must
    satisfy ||v|| >= ||v||_2.
    """
    af, bf = _to_float(a), _to_float(b)
    tree = cKDTree(bf)
    _, nearest = tree.query(af)
    worst = Fraction(0)
    for i, p in enumerate(a):
        q0 = b[int(nearest[i])]
        best = norm_sq([x - y for x, y in zip(p, q0)])
        if best <= worst:
            continue  # cannot raise the maximum
        reach = math.sqrt(float(best)) * (1 + 1e-9) + 1e-12
        for j in tree.query_ball_point(af[i], reach):
            q = b[j]
            v = norm_sq([x - y for x, y in zip(p, q)])
            if v < best:
                best = v
                if best <= worst:
                    break
        if best > worst:
            worst = best
    return worst


def hausdorff_sq(a: Sequence, b: Sequence, norm_sq: Callable) -> Fraction:
    return max(directed_sq(a, b, norm_sq), directed_sq(b, a, norm_sq))


def hausdorff_float(a, b) -> float:
    """Euclidean Hausdorff distance of two float point clouds."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.ndim == 1:
        a = a[:, None]
    if b.ndim == 1:
        b = b[:, None]
    da, _ = cKDTree(b).query(a)
    db, _ = cKDTree(a).query(b)
    return float(max(da.max(), db.max()))

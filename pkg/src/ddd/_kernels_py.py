"""Pure-Python reference kernels.

These are the fallback implementations selected when the compiled
extension (``ddd._kernels``) is unavailable or disabled via
``DDD_PURE_PYTHON=1``.  Both backends accumulate in exactly the same
order — ascending record order, ascending coordinate order, no pairwise
or parallel reduction — so their outputs are bit-identical.  Any change
to the loop structure here must be mirrored in ``_kernels.pyx``.
"""

import math

import numpy as np

BACKEND = "python"


def class_centroids(values, class_idx, class_count):
    """Per-class arithmetic means of row vectors.

    values: (N, d) float64, rows in dataset order.
    class_idx: (N,) int64 class index per row.
    Returns (centroids (C, d) float64, counts (C,) int64).
    """
    rows = values.tolist()
    idx = class_idx.tolist()
    n = len(rows)
    d = values.shape[1]
    acc = [[0.0] * d for _ in range(class_count)]
    counts = [0] * class_count
    for l in range(n):
        c = idx[l]
        row = rows[l]
        target = acc[c]
        for k in range(d):
            target[k] += row[k]
        counts[c] += 1
    for c in range(class_count):
        nc = counts[c]
        if nc > 0:
            target = acc[c]
            for k in range(d):
                target[k] = target[k] / nc
    return (
        np.array(acc, dtype=np.float64).reshape(class_count, d),
        np.array(counts, dtype=np.int64),
    )


def mean_distances(values, class_idx, class_count, centroids):
    """Mean Euclidean distance from each class's rows to each centroid.

    values: (N, d) rows of the first dataset, dataset order.
    centroids: (M, d) centroids of the second dataset.
    Returns (class_count, M) float64; entry (i, j) is the mean over the
    class-i rows of their L2 distance to centroid j.  Every class index
    in 0..class_count-1 must occur in class_idx.
    """
    rows = values.tolist()
    idx = class_idx.tolist()
    cents = centroids.tolist()
    n = len(rows)
    d = values.shape[1]
    m = len(cents)
    acc = [[0.0] * m for _ in range(class_count)]
    counts = [0] * class_count
    for l in range(n):
        i = idx[l]
        row = rows[l]
        target = acc[i]
        for j in range(m):
            cj = cents[j]
            s = 0.0
            for k in range(d):
                diff = row[k] - cj[k]
                s += diff * diff
            target[j] += math.sqrt(s)
        counts[i] += 1
    for i in range(class_count):
        ni = counts[i]
        target = acc[i]
        for j in range(m):
            target[j] = target[j] / ni
    return np.array(acc, dtype=np.float64).reshape(class_count, m)


def softmax_columns(dist, alpha):
    """Column-wise softmax of -alpha * dist with min-subtraction.

    Subtracting the column minimum before exponentiation keeps the
    largest argument at 0, so nothing overflows at large alpha; the
    result is mathematically identical to the unshifted form.
    """
    rows = dist.tolist()
    n = dist.shape[0]
    m = dist.shape[1]
    out = [[0.0] * m for _ in range(n)]
    for j in range(m):
        lo = rows[0][j]
        for i in range(1, n):
            v = rows[i][j]
            if v < lo:
                lo = v
        total = 0.0
        for i in range(n):
            e = math.exp(-alpha * (rows[i][j] - lo))
            out[i][j] = e
            total += e
        for i in range(n):
            out[i][j] = out[i][j] / total
    return np.array(out, dtype=np.float64).reshape(n, m)

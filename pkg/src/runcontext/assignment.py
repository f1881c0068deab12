"""Minimum-cost bipartite assignment (Hungarian method with potentials).

O(n^2 * m) for an n x m cost matrix with n <= m. Used to match mean player
positions onto formation template slots; small inputs, exact optimum.
"""
from __future__ import annotations

import numpy as np

from .validation import as_2d_array

_INF = float("inf")


def solve_assignment(cost) -> tuple[np.ndarray, float]:
    """Return (row_to_col, total_cost) minimizing the summed cost.

    Requires n_rows <= n_cols; every row is matched to a distinct column.
    """
    c = as_2d_array(cost, "cost")
    n, m = c.shape
    if n == 0:
        return np.empty(0, dtype=np.int64), 0.0
    if n > m:
        raise ValueError(f"need n_rows <= n_cols, got {n} x {m}")

    u = [0.0] * (n + 1)  # row potentials
    v = [0.0] * (m + 1)  # column potentials
    p = [0] * (m + 1)    # p[j]: row currently matched to column j (1-based)
    way = [0] * (m + 1)

    rows = c.tolist()
    for i in range(1, n + 1):
        p[0] = i
        j0 = 0
        minv = [_INF] * (m + 1)
        used = [False] * (m + 1)
        while True:
            used[j0] = True
            i0 = p[j0]
            delta = _INF
            j1 = 0
            row = rows[i0 - 1]
            ui0 = u[i0]
            for j in range(1, m + 1):
                if used[j]:
                    continue
                cur = row[j - 1] - ui0 - v[j]
                if cur < minv[j]:
                    minv[j] = cur
                    way[j] = j0
                if minv[j] < delta:
                    delta = minv[j]
                    j1 = j
            for j in range(m + 1):
                if used[j]:
                    u[p[j]] += delta
                    v[j] -= delta
                else:
                    minv[j] -= delta
            j0 = j1
            if p[j0] == 0:
                break
        while j0:
            j1 = way[j0]
            p[j0] = p[j1]
            j0 = j1

    row_to_col = np.empty(n, dtype=np.int64)
    for j in range(1, m + 1):
        if p[j] > 0:
            row_to_col[p[j] - 1] = j - 1
    total = float(c[np.arange(n), row_to_col].sum())
    return row_to_col, total

"""Dense two-phase simplex for small epigraph LPs

    minimize t   subject to   a_j . tau + t >= b_j,   tau free, t free.

These LPs are always feasible (take t large), so the outcomes are a finite
minimax value with an attaining tau, or unboundedness below, reported as
-inf together with a tau whose worst row value is already <= -1.

Bland's rule is used for both entering and leaving choices, which rules out
cycling; the problems here have a handful of rows, so speed is irrelevant.
"""

from __future__ import annotations

import math

import numpy as np

_EPS = 1e-10


def minimax_simplex(a_rows, b_vals) -> tuple[float, tuple[float, ...]]:
    a = np.asarray(a_rows, dtype=float)
    b = np.asarray(b_vals, dtype=float)
    if a.ndim != 2 or a.shape[0] != b.shape[0]:
        raise ValueError("rows and right-hand sides do not align")
    m, n = a.shape
    width = 2 * n + 2 + m  # tau+/tau-, t+/t-, slacks
    body = np.zeros((m, width))
    body[:, :n] = a
    body[:, n:2 * n] = -a
    body[:, 2 * n] = 1.0
    body[:, 2 * n + 1] = -1.0
    body[np.arange(m), 2 * n + 2 + np.arange(m)] = -1.0
    rhs = b.astype(float).copy()
    flip = rhs < 0.0
    body[flip] *= -1.0
    rhs[flip] *= -1.0

    basis = np.zeros(m, dtype=int)
    art_cols: list[int] = []
    extra = []
    for j in range(m):
        if flip[j]:
            basis[j] = 2 * n + 2 + j  # slack has coefficient +1 after negation
        else:
            col = np.zeros((m, 1))
            col[j, 0] = 1.0
            extra.append(col)
            basis[j] = width + len(art_cols)
            art_cols.append(width + len(art_cols))
    T = np.hstack([body] + extra) if extra else body
    total = T.shape[1]
    tab = np.hstack([T, rhs[:, None]])
    art_set = set(art_cols)

    def pivot(row: int, col: int) -> None:
        tab[row] /= tab[row, col]
        for i in range(m):
            if i != row and tab[i, col] != 0.0:
                tab[i] -= tab[i, col] * tab[row]
        basis[row] = col

    def run(cost: np.ndarray, allowed: int) -> int | None:
        """Pivot until optimal (None) or unbounded (returns entering col)."""
        while True:
            red = cost.astype(float).copy()
            for i in range(m):
                cb = cost[basis[i]]
                if cb != 0.0:
                    red -= cb * tab[i, :total]
            enter = -1
            for c in range(allowed):
                if red[c] < -_EPS:
                    enter = c
                    break
            if enter < 0:
                return None
            leave, best = -1, math.inf
            for i in range(m):
                coef = tab[i, enter]
                if coef > _EPS:
                    ratio = tab[i, total] / coef
                    if ratio < best - 1e-12 or (
                        abs(ratio - best) <= 1e-12 and (leave < 0 or basis[i] < basis[leave])
                    ):
                        best, leave = ratio, i
            if leave < 0:
                return enter
            pivot(leave, enter)

    if art_cols:
        cost1 = np.zeros(total)
        cost1[art_cols] = 1.0
        if run(cost1, total) is not None:
            raise RuntimeError("phase-1 objective cannot be unbounded")
        infeas = sum(tab[i, total] for i in range(m) if basis[i] in art_set)
        if infeas > 1e-7:
            raise RuntimeError("epigraph LP reported infeasible; this cannot happen")
        for i in range(m):
            if basis[i] in art_set:
                col = next((c for c in range(width) if abs(tab[i, c]) > _EPS), None)
                if col is not None:
                    pivot(i, col)

    cost2 = np.zeros(total)
    cost2[2 * n] = 1.0
    cost2[2 * n + 1] = -1.0
    enter = run(cost2, width)  # artificial columns barred from re-entering

    x = np.zeros(total)
    for i in range(m):
        x[basis[i]] = tab[i, total]
    tau = x[:n] - x[n:2 * n]
    t = float(x[2 * n] - x[2 * n + 1])
    if enter is None:
        return t, tuple(float(v) for v in tau)

    # Unbounded: march along the improving ray until the value clears -1.
    d = np.zeros(total)
    d[enter] = 1.0
    for i in range(m):
        d[basis[i]] = -tab[i, enter]
    dtau = d[:n] - d[n:2 * n]
    dt = float(d[2 * n] - d[2 * n + 1])
    if dt >= -1e-12:
        return t, tuple(float(v) for v in tau)  # numerically flat ray; treat as optimal
    step = (t - (min(t, 0.0) - 1.0)) / (-dt)
    tau = tau + step * dtau
    return -math.inf, tuple(float(v) for v in tau)

"""Compiled inner loops for tableau sampling and Edelman-Greene sliding.

Cells are 0-based here: cell ``(i, j)`` of a shape with row lengths ``rows``
exists iff ``j < rows[i]``.  All routines take a ``numpy.random.Generator``
so that every draw comes from an explicit, caller-owned stream.
"""
from __future__ import annotations

import numba
import numpy as np

_JIT = dict(cache=True, nogil=True)


@numba.njit(**_JIT)
def _fenwick_build(values):
    m = values.shape[0]
    tree = np.zeros(m + 1, dtype=np.int64)
    for idx in range(m):
        k = idx + 1
        tree[k] += values[idx]
        parent = k + (k & -k)
        if parent <= m:
            tree[parent] += tree[k]
    return tree


@numba.njit(**_JIT)
def _fenwick_add(tree, idx, delta):
    k = idx + 1
    m = tree.shape[0] - 1
    while k <= m:
        tree[k] += delta
        k += k & -k


@numba.njit(**_JIT)
def _fenwick_find(tree, target):
    # smallest idx with prefix_sum(idx + 1) > target, and the offset inside it
    m = tree.shape[0] - 1
    pos = 0
    step = 1
    while step * 2 <= m:
        step *= 2
    while step > 0:
        nxt = pos + step
        if nxt <= m and tree[nxt] <= target:
            pos = nxt
            target -= tree[nxt]
        step //= 2
    return pos, target


@numba.njit(**_JIT)
def hook_walk_fill(rows, rng, targets, n_targets):
    """Greene-Nijenhuis-Wilf sampler filling entries from the largest down.

    Returns ``(entries, removed)``.  ``entries[i, j]`` holds the value placed
    in cell ``(i, j)`` or 0 when the cell was never reached.  If ``n_targets``
    is positive, sampling stops as soon as every cell flagged in ``targets``
    has been filled; the filled values are then exact draws of the uniform
    SYT restricted to those cells.
    """
    n_rows = rows.shape[0]
    n_cols = rows[0] if n_rows > 0 else 0
    r = rows.copy()
    c = np.zeros(n_cols, dtype=np.int64)
    for i in range(n_rows):
        for j in range(r[i]):
            c[j] += 1
    total = 0
    for i in range(n_rows):
        total += r[i]
    entries = np.zeros((n_rows, n_cols), dtype=np.int64)
    tree = _fenwick_build(r)
    remaining = n_targets
    removed = 0
    value = total
    while value > 0:
        target = int(rng.random() * value)
        i, j = _fenwick_find(tree, target)
        while True:
            arm = r[i] - j - 1
            leg = c[j] - i - 1
            h = arm + leg
            if h == 0:
                break
            x = int(rng.random() * h)
            if x < arm:
                j = j + 1 + x
            else:
                i = i + 1 + (x - arm)
        entries[i, j] = value
        r[i] -= 1
        c[j] -= 1
        _fenwick_add(tree, i, -1)
        removed += 1
        value -= 1
        if n_targets > 0 and targets[i, j]:
            remaining -= 1
            if remaining == 0:
                break
    return entries, removed


@numba.njit(**_JIT)
def eg_forward(E, n, steps, out):
    """Run ``steps`` forward Edelman-Greene iterations on a staircase.

    ``E`` is modified in place; only the relative order of raw values
    matters, so the "increase every entry by one" step is replaced by writing
    a fresh minimum into the top-left box.  ``out[t]`` receives the swap index.
    """
    lo = E[0, 0]
    for t in range(steps):
        best_i = 0
        best = E[0, n - 2]
        for i in range(1, n - 1):
            v = E[i, n - 2 - i]
            if v > best:
                best = v
                best_i = i
        i = best_i
        j = n - 2 - best_i
        out[t] = j + 1
        while i > 0 or j > 0:
            if i == 0:
                ni, nj = i, j - 1
            elif j == 0:
                ni, nj = i - 1, j
            elif E[i - 1, j] > E[i, j - 1]:
                ni, nj = i - 1, j
            else:
                ni, nj = i, j - 1
            E[i, j] = E[ni, nj]
            i, j = ni, nj
        lo -= 1
        E[0, 0] = lo


@numba.njit(**_JIT)
def eg_backward(E, n, steps, out, stop_at):
    """Inverse of :func:`eg_forward`, producing swaps at times 0, -1, -2, ...

    The minimum leaves the top-left box, the hole slides outward along the
    smaller neighbour until it reaches an outer corner, and a fresh maximum
    is written there.  If ``stop_at`` is positive the loop ends right after
    the first step whose swap equals ``stop_at``.  Returns the number of
    steps performed.
    """
    hi = E[0, 0]
    for i in range(n - 1):
        for j in range(n - 1 - i):
            if E[i, j] > hi:
                hi = E[i, j]
    for t in range(steps):
        i = 0
        j = 0
        while i + j < n - 2:
            if E[i, j + 1] < E[i + 1, j]:
                ni, nj = i, j + 1
            else:
                ni, nj = i + 1, j
            E[i, j] = E[ni, nj]
            i, j = ni, nj
        hi += 1
        E[i, j] = hi
        out[t] = j + 1
        if stop_at > 0 and j + 1 == stop_at:
            return t + 1
    return steps


@numba.njit(**_JIT)
def top_entries_batch(rows, rng, cell_i, cell_j, count):
    """``count`` independent uniform SYT, keeping only the listed cells.

    Returns an array of shape ``(count, len(cell_i))``.
    """
    n_rows = rows.shape[0]
    n_cols = rows[0]
    m = cell_i.shape[0]
    mask = np.zeros((n_rows, n_cols), dtype=np.bool_)
    for c in range(m):
        mask[cell_i[c], cell_j[c]] = True
    n_targets = 0
    for i in range(n_rows):
        for j in range(n_cols):
            if mask[i, j]:
                n_targets += 1
    out = np.empty((count, m), dtype=np.int64)
    for s in range(count):
        entries, _ = hook_walk_fill(rows, rng, mask, n_targets)
        for c in range(m):
            out[s, c] = entries[cell_i[c], cell_j[c]]
    return out


@numba.njit(**_JIT)
def spacing_batch(n, k, rng, count):
    """Spacing around time 0 for ``count`` uniform networks (see spacings)."""
    rows = np.empty(n - 1, dtype=np.int64)
    for i in range(n - 1):
        rows[i] = n - 1 - i
    N = n * (n - 1) // 2
    mask = np.zeros((n - 1, n - 1), dtype=np.bool_)
    buf = np.zeros(N, dtype=np.int64)
    out = np.empty(count, dtype=np.int64)
    for s in range(count):
        E, _ = hook_walk_fill(rows, rng, mask, 0)
        y = N + 1 - E[n - k - 1, k - 1]
        steps = eg_backward(E, n, N, buf, k)
        out[s] = y + steps - 1
    return out

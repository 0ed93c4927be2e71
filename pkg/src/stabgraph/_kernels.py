"""Equitable-partition refinement kernels.

An ordered partition of ``0..n-1`` is stored in three ``int32`` arrays:

``lab``
    vertices in cell order;
``cell_of[v]``
    start position (in ``lab``) of the cell containing ``v``;
``cell_end[s]``
    one past the last position of the cell starting at ``s`` (only read at
    cell starts).

``refine`` splits cells until every cell has a constant number of neighbours
in every other cell, and returns a hash of the splitting trace.  Splitting is
label-invariant: fragments are ordered by neighbour count and splitters are
consumed FIFO by cell start, so isomorphic inputs give equal traces.

Two implementations share that contract bit for bit: a numba ``@njit`` kernel
(default) and a numpy one, selected with ``STAB_DISABLE_NUMBA=1`` or when
numba is not importable.
"""

from __future__ import annotations

import os

import numpy as np

_MOD = 2147483647
_MUL = 1000003
TRACE_SEED = 1


def _refine_py(adj, lab, cell_of, cell_end, queue_init):
    # scalars are widened with int() so the trace arithmetic is 64-bit in
    # both the interpreted and the compiled version
    n = lab.shape[0]
    in_q = np.zeros(n, dtype=np.bool_)
    queue = np.empty(n + 1, dtype=np.int32)
    head = 0
    size = 0
    for i in range(queue_init.shape[0]):
        s = int(queue_init[i])
        queue[(head + size) % (n + 1)] = s
        size += 1
        in_q[s] = True
    count = np.zeros(n, dtype=np.int32)
    trace = TRACE_SEED
    while size > 0:
        w = int(queue[head])
        head = (head + 1) % (n + 1)
        size -= 1
        in_q[w] = False
        we = int(cell_end[w])
        for v in range(n):
            count[v] = 0
        for p in range(w, we):
            x = lab[p]
            for v in range(n):
                count[v] += adj[x, v]
        trace = (trace * _MUL + w + 1) % _MOD
        trace = (trace * _MUL + we - w) % _MOD
        s = 0
        while s < n:
            e = int(cell_end[s])
            c0 = int(count[lab[s]])
            same = True
            for p in range(s + 1, e):
                if count[lab[p]] != c0:
                    same = False
                    break
            if same:
                trace = (trace * _MUL + c0 + 7) % _MOD
                s = e
                continue
            # insertion sort of the cell by (count, vertex)
            for p in range(s + 1, e):
                v = lab[p]
                kv = count[v]
                q = p - 1
                while q >= s and (count[lab[q]] > kv or (count[lab[q]] == kv and lab[q] > v)):
                    lab[q + 1] = lab[q]
                    q -= 1
                lab[q + 1] = v
            was = in_q[s]
            best_start = s
            best_size = 0
            fs = s
            while fs < e:
                c = int(count[lab[fs]])
                fe = fs + 1
                while fe < e and count[lab[fe]] == c:
                    fe += 1
                cell_end[fs] = fe
                for p in range(fs, fe):
                    cell_of[lab[p]] = fs
                trace = (trace * _MUL + c + 11) % _MOD
                trace = (trace * _MUL + fe - fs) % _MOD
                if fe - fs > best_size:
                    best_size = fe - fs
                    best_start = fs
                fs = fe
            fs = s
            while fs < e:
                fe = int(cell_end[fs])
                push = (not in_q[fs]) if was else (fs != best_start)
                if push:
                    queue[(head + size) % (n + 1)] = fs
                    size += 1
                    in_q[fs] = True
                fs = fe
            s = e
    return trace


def _refine_numpy(adj, lab, cell_of, cell_end, queue_init):
    """Vectorised twin of the loop kernel; same output, same trace."""
    n = lab.shape[0]
    in_q = np.zeros(n, dtype=bool)
    queue = [int(s) for s in queue_init]
    for s in queue:
        in_q[s] = True
    head = 0
    trace = TRACE_SEED
    while head < len(queue):
        w = queue[head]
        head += 1
        in_q[w] = False
        we = int(cell_end[w])
        count = adj[lab[w:we]].sum(axis=0, dtype=np.int64)
        trace = (trace * _MUL + w + 1) % _MOD
        trace = (trace * _MUL + we - w) % _MOD
        counts_lab = count[lab]
        s = 0
        while s < n:
            e = int(cell_end[s])
            seg = counts_lab[s:e]
            c0 = int(seg[0])
            if e - s == 1 or (seg == c0).all():
                trace = (trace * _MUL + c0 + 7) % _MOD
                s = e
                continue
            verts = lab[s:e]
            order = np.lexsort((verts, seg))
            verts = verts[order]
            seg = seg[order]
            lab[s:e] = verts
            was = bool(in_q[s])
            cuts = np.flatnonzero(np.diff(seg)) + 1
            bounds = [0, *cuts.tolist(), e - s]
            best_start, best_size = s, 0
            starts = []
            for a, b in zip(bounds[:-1], bounds[1:]):
                fs, fe = s + a, s + b
                cell_end[fs] = fe
                cell_of[verts[a:b]] = fs
                trace = (trace * _MUL + int(seg[a]) + 11) % _MOD
                trace = (trace * _MUL + fe - fs) % _MOD
                if fe - fs > best_size:
                    best_size, best_start = fe - fs, fs
                starts.append(fs)
            for fs in starts:
                push = (not in_q[fs]) if was else (fs != best_start)
                if push:
                    queue.append(fs)
                    in_q[fs] = True
            s = e
    return trace


def _load_numba():
    if os.environ.get("STAB_DISABLE_NUMBA", "").strip() not in ("", "0"):
        return None
    try:
        from numba import njit
    except ImportError:  # pragma: no cover - depends on the environment
        return None
    return njit(cache=True, nogil=True)(_refine_py)


_refine_jit = _load_numba()

BACKEND = "numba" if _refine_jit is not None else "numpy"


def refine(adj, lab, cell_of, cell_end, queue_init) -> int:
    """Refine the partition in place to the coarsest equitable refinement."""
    if _refine_jit is not None:
        return int(_refine_jit(adj, lab, cell_of, cell_end, queue_init))
    return int(_refine_numpy(adj, lab, cell_of, cell_end, queue_init))


def get_refiner(backend: str):
    """Return the kernel for ``backend`` in ``{"numba", "numpy", "python"}``."""
    if backend == "numba":
        if _refine_jit is None:
            raise RuntimeError("numba kernel unavailable (disabled or not installed)")
        return _refine_jit
    if backend == "numpy":
        return _refine_numpy
    if backend == "python":
        return _refine_py
    raise ValueError(f"unknown backend {backend!r}")

"""Individualisation-refinement backtracking over ordered partitions.

Used for automorphism groups of vertex-coloured graphs and for graph
isomorphism.  The first path through the search tree picks, at every level,
the first smallest non-singleton cell and its least vertex; the group is then
assembled bottom-up, searching one automorphism per basic-orbit
representative that is not already reached by generators found deeper down.
The product of the basic-orbit lengths is the exact group order.
"""

from __future__ import annotations

import os
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import SearchBudgetExceeded

DEFAULT_BUDGET = 10_000_000


def default_budget() -> int:
    raw = os.environ.get("STAB_BUDGET", "").strip()
    if raw:
        try:
            value = int(raw)
        except ValueError:
            raise ValueError(f"STAB_BUDGET must be an integer, got {raw!r}") from None
        if value > 0:
            return value
    return DEFAULT_BUDGET


class Budget:
    """Node counter shared by the searches of one operation."""

    def __init__(self, limit: int | None = None, what: str = "search"):
        self.limit = default_budget() if limit is None else int(limit)
        self.used = 0
        self.what = what

    def spend(self, k: int = 1) -> None:
        self.used += k
        if self.used > self.limit:
            raise SearchBudgetExceeded(self.limit, self.what)


def as_budget(budget: Budget | int | None, what: str = "search") -> Budget:
    return budget if isinstance(budget, Budget) else Budget(budget, what)


@dataclass
class _State:
    lab: np.ndarray
    cell_of: np.ndarray
    cell_end: np.ndarray

    def copy(self) -> _State:
        return _State(self.lab.copy(), self.cell_of.copy(), self.cell_end.copy())


class _Tree:
    def __init__(self, adj: np.ndarray, colors: Sequence[int] | None, budget: Budget):
        self.adj = np.ascontiguousarray(adj, dtype=np.uint8)
        self.n = self.adj.shape[0]
        self.colors = None if colors is None else [int(c) for c in colors]
        self.budget = budget

    def root(self) -> tuple[_State, int]:
        n = self.n
        if self.colors is None:
            lab = np.arange(n, dtype=np.int32)
            keys = [0] * n
        else:
            lab = np.array(sorted(range(n), key=lambda v: (self.colors[v], v)), dtype=np.int32)
            keys = [self.colors[v] for v in lab]
        cell_of = np.empty(n, dtype=np.int32)
        cell_end = np.zeros(n, dtype=np.int32)
        starts = []
        s = 0
        while s < n:
            e = s + 1
            while e < n and keys[e] == keys[s]:
                e += 1
            cell_end[s] = e
            cell_of[lab[s:e]] = s
            starts.append(s)
            s = e
        st = _State(lab, cell_of, cell_end)
        self.budget.spend()
        trace = _kernels.refine(self.adj, st.lab, st.cell_of, st.cell_end, np.array(starts, dtype=np.int32))
        # colour classes must line up between compared trees
        trace = hash((trace, tuple(keys)))
        return st, trace

    def child(self, st: _State, v: int) -> tuple[_State, int]:
        self.budget.spend()
        c = st.copy()
        s = int(c.cell_of[v])
        e = int(c.cell_end[s])
        pos = int(np.flatnonzero(c.lab[s:e] == v)[0]) + s
        c.lab[pos], c.lab[s] = c.lab[s], c.lab[pos]
        c.cell_end[s] = s + 1
        if e > s + 1:
            c.cell_end[s + 1] = e
            c.cell_of[c.lab[s + 1 : e]] = s + 1
        c.cell_of[v] = s
        trace = _kernels.refine(self.adj, c.lab, c.cell_of, c.cell_end, np.array([s], dtype=np.int32))
        return c, trace


def _target_cell(st: _State) -> int:
    n = st.lab.shape[0]
    best, best_size = -1, n + 1
    s = 0
    while s < n:
        e = int(st.cell_end[s])
        if 1 < e - s < best_size:
            best, best_size = s, e - s
            if best_size == 2:
                break
        s = e
    return best


@dataclass
class _Level:
    state: _State
    target: int
    size: int
    cell: list[int]
    base_point: int
    trace: int


class _FirstPath:
    def __init__(self, tree: _Tree):
        self.tree = tree
        state, self.root_trace = tree.root()
        self.levels: list[_Level] = []
        while True:
            t = _target_cell(state)
            if t < 0:
                break
            e = int(state.cell_end[t])
            cell = sorted(int(x) for x in state.lab[t:e])
            b = cell[0]
            child, tr = tree.child(state, b)
            self.levels.append(_Level(state, t, e - t, cell, b, tr))
            state = child
        self.leaf = state.lab.copy()
        adj = tree.adj
        self.leaf_matrix = adj[np.ix_(self.leaf, self.leaf)]

    @property
    def base(self) -> list[int]:
        return [lv.base_point for lv in self.levels]


def _descend(tree: _Tree, path: _FirstPath, state: _State, j: int) -> np.ndarray | None:
    """Depth-first search for a leaf below ``state`` equivalent to the first leaf."""
    if j == len(path.levels):
        lab = state.lab
        if not _is_discrete(state):
            return None
        if not np.array_equal(tree.adj[np.ix_(lab, lab)], path.leaf_matrix):
            return None
        g = np.empty(lab.shape[0], dtype=np.int64)
        g[path.leaf] = lab
        return g
    lv = path.levels[j]
    t = lv.target
    if int(state.cell_of[state.lab[t]]) != t or int(state.cell_end[t]) - t != lv.size:
        return None
    for u in sorted(int(x) for x in state.lab[t : t + lv.size]):
        child, tr = tree.child(state, u)
        if tr != lv.trace:
            continue
        g = _descend(tree, path, child, j + 1)
        if g is not None:
            return g
    return None


def _is_discrete(st: _State) -> bool:
    return bool(np.array_equal(st.cell_of[st.lab], np.arange(st.lab.shape[0])))


def _orbit(point: int, gens: list[np.ndarray]) -> set[int]:
    orb = {point}
    frontier = [point]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = int(g[x])
                if y not in orb:
                    orb.add(y)
                    nxt.append(y)
        frontier = nxt
    return orb


@dataclass
class AutResult:
    generators: list[np.ndarray]
    order: int
    base: list[int]
    orbit_sizes: list[int]


def automorphisms(
    adj: np.ndarray, colors: Sequence[int] | None = None, budget: Budget | int | None = None
) -> AutResult:
    """Generators and exact order of the colour-preserving automorphism group."""
    budget = as_budget(budget, "automorphism search")
    n = adj.shape[0]
    if n == 0:
        return AutResult([], 1, [], [])
    tree = _Tree(adj, colors, budget)
    path = _FirstPath(tree)
    gens: list[np.ndarray] = []
    sizes = [1] * len(path.levels)
    for i in range(len(path.levels) - 1, -1, -1):
        lv = path.levels[i]
        orb = _orbit(lv.base_point, gens)
        for v in lv.cell:
            if v in orb:
                continue
            child, tr = tree.child(lv.state, v)
            if tr != lv.trace:
                continue
            g = _descend(tree, path, child, i + 1)
            if g is not None:
                gens.append(g)
                orb = _orbit(lv.base_point, gens)
        sizes[i] = len(orb)
    order = 1
    for s in sizes:
        order *= s
    return AutResult(gens, order, path.base, sizes)


def find_isomorphism(
    adj_g: np.ndarray,
    adj_h: np.ndarray,
    colors_g: Sequence[int] | None = None,
    colors_h: Sequence[int] | None = None,
    budget: Budget | int | None = None,
) -> np.ndarray | None:
    """A map ``phi`` with ``g ~ (u, v)`` iff ``h ~ (phi[u], phi[v])``, or ``None``."""
    budget = as_budget(budget, "isomorphism search")
    if adj_g.shape != adj_h.shape:
        return None
    if adj_g.shape[0] == 0:
        return np.zeros(0, dtype=np.int64)
    path = _FirstPath(_Tree(adj_g, colors_g, budget))
    tree_h = _Tree(adj_h, colors_h, budget)
    root, tr = tree_h.root()
    if tr != path.root_trace:
        return None
    hmap = _descend(tree_h, path, root, 0)
    if hmap is None:
        return None
    # hmap sends the first leaf of g (as positions) onto a leaf of h
    return hmap

"""Finite simple graphs, circulant construction and graph isomorphism."""

from __future__ import annotations

import math
from collections import deque
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import (
    EmptySubset,
    LoopRejected,
    NonInverseClosed,
    ParseError,
    TrivialGraph,
    VertexOutOfRange,
    ZeroInConnectionSet,
)


class Graph:
    """Immutable simple undirected graph on vertices ``0..order-1``.

    Adjacency is held as one frozenset of neighbours per vertex; a dense
    ``uint8`` matrix is derived lazily for the numeric kernels.
    """

    def __init__(self, order: int, neighbors: Sequence[Iterable[int]]):
        if order < 0 or len(neighbors) != order:
            raise ValueError("neighbour list length must equal the order")
        nbrs = tuple(frozenset(int(u) for u in row) for row in neighbors)
        for v, row in enumerate(nbrs):
            if v in row:
                raise LoopRejected(f"loop at vertex {v}")
            for u in row:
                if not 0 <= u < order:
                    raise VertexOutOfRange(f"vertex {u} not in 0..{order - 1}")
                if v not in nbrs[u]:
                    raise ValueError(f"adjacency not symmetric at ({v}, {u})")
        self._order = order
        self._nbrs = nbrs

    @classmethod
    def from_matrix(cls, matrix) -> Graph:
        a = np.asarray(matrix)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError("adjacency matrix must be square")
        rows = [np.flatnonzero(a[v]).tolist() for v in range(a.shape[0])]
        return cls(a.shape[0], rows)

    @property
    def order(self) -> int:
        return self._order

    def neighbors(self, v: int) -> frozenset[int]:
        return self._nbrs[v]

    def adjacent(self, u: int, v: int) -> bool:
        return v in self._nbrs[u]

    def degree(self, v: int) -> int:
        return len(self._nbrs[v])

    def degrees(self) -> list[int]:
        return [len(row) for row in self._nbrs]

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self._order) for v in sorted(self._nbrs[u]) if u < v]

    @property
    def size(self) -> int:
        return sum(len(row) for row in self._nbrs) // 2

    @cached_property
    def matrix(self) -> np.ndarray:
        m = np.zeros((self._order, self._order), dtype=np.uint8)
        for v, row in enumerate(self._nbrs):
            if row:
                m[v, list(row)] = 1
        m.setflags(write=False)
        return m

    def relabel(self, perm: Sequence[int]) -> Graph:
        """Return the graph whose edge ``{perm[u], perm[v]}`` replaces ``{u, v}``."""
        rows: list[set[int]] = [set() for _ in range(self._order)]
        for u, v in self.edges():
            rows[perm[u]].add(perm[v])
            rows[perm[v]].add(perm[u])
        return Graph(self._order, rows)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._order == other._order and self._nbrs == other._nbrs

    def __hash__(self) -> int:
        return hash((self._order, self._nbrs))

    def __repr__(self) -> str:
        return f"Graph(order={self._order}, edges={self.edges()})"


def build_graph(order: int, edges: Iterable[tuple[int, int]]) -> Graph:
    rows: list[set[int]] = [set() for _ in range(order)]
    for u, v in edges:
        if u == v:
            raise LoopRejected(f"loop ({u}, {v}) in a simple graph")
        for x in (u, v):
            if not 0 <= x < order:
                raise VertexOutOfRange(f"vertex {x} not in 0..{order - 1}")
        rows[u].add(v)
        rows[v].add(u)
    return Graph(order, rows)


def complete_graph(n: int) -> Graph:
    return Graph(n, [[u for u in range(n) if u != v] for v in range(n)])


def empty_graph(n: int) -> Graph:
    return Graph(n, [[] for _ in range(n)])


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise TrivialGraph("a cycle needs at least 3 vertices")
    return build_graph(n, [(i, (i + 1) % n) for i in range(n)])


def path_graph(n: int) -> Graph:
    return build_graph(n, [(i, i + 1) for i in range(n - 1)])


def complement(g: Graph) -> Graph:
    n = g.order
    if n < 2:
        raise TrivialGraph("the complement needs at least two vertices")
    return Graph(n, [[u for u in range(n) if u != v and u not in g.neighbors(v)] for v in range(n)])


def disjoint_union(g: Graph, h: Graph) -> Graph:
    off = g.order
    rows = [list(g.neighbors(v)) for v in range(g.order)]
    rows += [[u + off for u in h.neighbors(v)] for v in range(h.order)]
    return Graph(g.order + h.order, rows)


def induced(g: Graph, vs: Iterable[int]) -> Graph:
    keep = sorted(set(vs))
    if not keep:
        raise EmptySubset("induced subgraph of an empty vertex set")
    for v in keep:
        if not 0 <= v < g.order:
            raise VertexOutOfRange(f"vertex {v} not in 0..{g.order - 1}")
    index = {v: i for i, v in enumerate(keep)}
    return Graph(len(keep), [[index[u] for u in g.neighbors(v) if u in index] for v in keep])


# --- structural predicates -------------------------------------------------


@dataclass(frozen=True)
class BasicProfile:
    connected: bool
    bipartition: tuple[tuple[int, ...], tuple[int, ...]] | None
    twin_witness: tuple[int, int] | None

    @property
    def bipartite(self) -> bool:
        return self.bipartition is not None

    @property
    def r_thin(self) -> bool:
        return self.twin_witness is None


def components(g: Graph) -> list[list[int]]:
    seen = [False] * g.order
    out = []
    for s in range(g.order):
        if seen[s]:
            continue
        seen[s] = True
        comp, queue = [], deque([s])
        while queue:
            v = queue.popleft()
            comp.append(v)
            for u in g.neighbors(v):
                if not seen[u]:
                    seen[u] = True
                    queue.append(u)
        out.append(sorted(comp))
    return out


def is_connected(g: Graph) -> bool:
    return g.order > 0 and len(components(g)) == 1


def two_coloring(g: Graph) -> list[int] | None:
    """Side (0/1) of every vertex, or ``None`` when some cycle is odd."""
    side = [-1] * g.order
    for s in range(g.order):
        if side[s] >= 0:
            continue
        side[s] = 0
        queue = deque([s])
        while queue:
            v = queue.popleft()
            for u in g.neighbors(v):
                if side[u] < 0:
                    side[u] = 1 - side[v]
                    queue.append(u)
                elif side[u] == side[v]:
                    return None
    return side


def twin_pair(g: Graph) -> tuple[int, int] | None:
    """Lexicographically least pair ``u < v`` with equal open neighbourhoods."""
    first: dict[frozenset[int], int] = {}
    best = None
    for v in range(g.order):
        key = g.neighbors(v)
        if key in first:
            cand = (first[key], v)
            if best is None or cand < best:
                best = cand
        else:
            first[key] = v
    return best


def has_distinct_closed_neighborhoods(g: Graph) -> bool:
    closed = {g.neighbors(v) | {v} for v in range(g.order)}
    return len(closed) == g.order


def classify_basic(g: Graph) -> BasicProfile:
    side = two_coloring(g)
    parts = None
    if side is not None:
        parts = (
            tuple(v for v in range(g.order) if side[v] == 0),
            tuple(v for v in range(g.order) if side[v] == 1),
        )
    return BasicProfile(is_connected(g), parts, twin_pair(g))


# --- circulants --------------------------------------------------------------


@dataclass(frozen=True)
class CirculantSpec:
    """Modulus ``n`` and an inverse-closed connection set ``s`` of ``Z_n``.

    Construction is strict: use :meth:`closed` to complete a set of
    representatives under negation.
    """

    n: int
    s: tuple[int, ...]

    def __post_init__(self):
        if self.n < 2:
            raise TrivialGraph("circulant modulus must be at least 2")
        vals = sorted({int(x) for x in self.s})
        for x in vals:
            if x % self.n == 0:
                raise ZeroInConnectionSet(f"0 (as {x}) in connection set")
            if not 0 < x < self.n:
                raise VertexOutOfRange(f"residue {x} not in 1..{self.n - 1}")
        for x in vals:
            if self.n - x not in vals:
                raise NonInverseClosed(f"{x} in S but {self.n - x} is not")
        object.__setattr__(self, "s", tuple(vals))

    @classmethod
    def closed(cls, n: int, reps: Iterable[int]) -> CirculantSpec:
        vals: set[int] = set()
        for r in reps:
            r %= n
            if r == 0:
                raise ZeroInConnectionSet("0 in connection set")
            vals.update((r, (-r) % n))
        return cls(n, tuple(vals))

    @classmethod
    def parse(cls, text: str) -> CirculantSpec:
        parts = text.strip().split(":")
        if len(parts) != 3 or parts[0] != "c":
            raise ParseError(f"expected c:<n>:<s1,s2,...>, got {text!r}")
        try:
            n = int(parts[1])
            reps = [int(x) for x in parts[2].split(",") if x.strip()]
        except ValueError as exc:
            raise ParseError(f"bad circulant spec {text!r}") from exc
        return cls.closed(n, reps)

    def __str__(self) -> str:
        return f"c:{self.n}:{','.join(map(str, self.s))}"

    @property
    def set(self) -> frozenset[int]:
        return frozenset(self.s)

    @property
    def m(self) -> int:
        return self.n // 2

    @property
    def s_even(self) -> frozenset[int]:
        return frozenset(x for x in self.s if x % 2 == 0)

    @property
    def s_odd(self) -> frozenset[int]:
        return frozenset(x for x in self.s if x % 2 == 1)

    def evens(self) -> list[int]:
        return list(range(0, self.n, 2))

    def scaled(self, r: int) -> CirculantSpec:
        return CirculantSpec(self.n, tuple((r * x) % self.n for x in self.s))


def circulant(spec: CirculantSpec | int, s: Iterable[int] | None = None) -> Graph:
    if not isinstance(spec, CirculantSpec):
        spec = CirculantSpec(spec, tuple(s or ()))
    return cayley_cyclic(spec.n, spec.s)


def cayley_cyclic(n: int, conn: Iterable[int]) -> Graph:
    """Cayley graph on ``Z_n``; ``conn`` must be 0-free and inverse-closed."""
    conn = sorted({x % n for x in conn})
    if 0 in conn:
        raise ZeroInConnectionSet("0 in connection set")
    cs = set(conn)
    if any((-x) % n not in cs for x in conn):
        raise NonInverseClosed("connection set not closed under negation")
    return Graph(n, [[(v + x) % n for x in conn] for v in range(n)])


# --- text format -------------------------------------------------------------


def format_graph(g: Graph) -> str:
    lines = [str(g.order)] + [f"{u} {v}" for u, v in g.edges()]
    return "\n".join(lines) + "\n"


def parse_graph(text: str) -> Graph:
    rows = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    rows = [r for r in rows if r]
    if not rows:
        raise ParseError("empty graph text")
    try:
        n = int(rows[0])
        edges = []
        for r in rows[1:]:
            u, v = r.split()
            edges.append((int(u), int(v)))
    except ValueError as exc:
        raise ParseError(f"malformed graph text: {exc}") from exc
    if n < 1:
        raise ParseError("order must be positive")
    return build_graph(n, edges)


# --- isomorphism -------------------------------------------------------------


def _affine_circulant_iso(g: CirculantSpec, h: CirculantSpec) -> list[int] | None:
    if g.n != h.n or len(g.s) != len(h.s):
        return None
    target = h.set
    for r in range(1, g.n):
        if math.gcd(r, g.n) == 1 and {(r * x) % g.n for x in g.s} == target:
            return [(r * x) % g.n for x in range(g.n)]
    return None


def is_isomorphism(g: Graph, h: Graph, phi: Sequence[int]) -> bool:
    if g.order != h.order or sorted(phi) != list(range(g.order)):
        return False
    return g.size == h.size and all(h.adjacent(phi[u], phi[v]) for u, v in g.edges())


def isomorphism(g: Graph | CirculantSpec, h: Graph | CirculantSpec, budget: int | None = None):
    """Vertex bijection carrying edges of ``g`` onto edges of ``h``, or ``None``.

    Circulant specs first try multiplier maps ``x -> r x``; otherwise the
    refinement-pruned backtracking search decides.  Returns a
    :class:`~stabgraph.perm.Permutation`.
    """
    from .perm import Permutation
    from .search import find_isomorphism

    if isinstance(g, CirculantSpec) and isinstance(h, CirculantSpec):
        phi = _affine_circulant_iso(g, h)
        if phi is not None:
            return Permutation(phi)
    gg = circulant(g) if isinstance(g, CirculantSpec) else g
    hh = circulant(h) if isinstance(h, CirculantSpec) else h
    if gg.order != hh.order or gg.size != hh.size:
        return None
    if sorted(gg.degrees()) != sorted(hh.degrees()):
        return None
    phi = find_isomorphism(gg.matrix, hh.matrix, budget=budget)
    if phi is None:
        return None
    phi = [int(x) for x in phi]
    if not is_isomorphism(gg, hh, phi):
        raise AssertionError("isomorphism search returned an invalid map")
    return Permutation(phi)

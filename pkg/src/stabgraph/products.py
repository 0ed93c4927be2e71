"""The five graph products and the direct product bundle.

Vertex ``(a, x)`` of a product of ``g`` (left) and ``h`` (right) gets index
``a * h.order + x``.
"""

from __future__ import annotations

import enum
from collections.abc import Callable, Mapping, Sequence
from dataclasses import dataclass

import numpy as np

from .errors import BundleInvolutionViolated, InvalidInput, NotAnAutomorphism, ParseError
from .graph import Graph
from .perm import Permutation, preserves_adjacency


class ProductKind(enum.Enum):
    DIRECT = "direct"
    CARTESIAN = "cartesian"
    STRONG = "strong"
    SEMISTRONG = "semistrong"
    LEXICOGRAPHIC = "lex"

    @classmethod
    def parse(cls, text: str) -> ProductKind:
        key = text.strip().lower()
        aliases = {"lexicographic": "lex", "semi-strong": "semistrong", "tensor": "direct"}
        key = aliases.get(key, key)
        for kind in cls:
            if kind.value == key:
                return kind
        raise ParseError(f"unknown product kind {text!r}")


@dataclass(frozen=True)
class ProductGraph:
    graph: Graph
    left_order: int
    right_order: int

    def __post_init__(self):
        if self.graph.order != self.left_order * self.right_order:
            raise ValueError("product order mismatch")

    def index(self, a: int, x: int) -> int:
        return a * self.right_order + x

    def pair(self, v: int) -> tuple[int, int]:
        return divmod(v, self.right_order)


def _kron_graph(block: np.ndarray, left: int, right: int) -> ProductGraph:
    np.fill_diagonal(block, 0)
    return ProductGraph(Graph.from_matrix(block), left, right)


def product(g: Graph, h: Graph, kind: ProductKind | str) -> ProductGraph:
    if isinstance(kind, str):
        kind = ProductKind.parse(kind)
    if g.order < 1 or h.order < 1:
        raise InvalidInput("product factors must be nonempty")
    a = g.matrix.astype(np.int64)
    b = h.matrix.astype(np.int64)
    ia = np.eye(g.order, dtype=np.int64)
    ib = np.eye(h.order, dtype=np.int64)
    if kind is ProductKind.DIRECT:
        m = np.kron(a, b)
    elif kind is ProductKind.CARTESIAN:
        m = np.kron(ia, b) + np.kron(a, ib)
    elif kind is ProductKind.STRONG:
        m = np.kron(ia, b) + np.kron(a, ib) + np.kron(a, b)
    elif kind is ProductKind.SEMISTRONG:
        # (a ~ b or a = b) and x ~ y
        m = np.kron(a + ia, b)
    else:
        # a ~ b, or a = b and x ~ y
        m = np.kron(a, np.ones_like(b)) + np.kron(ia, b)
    return _kron_graph((m > 0).astype(np.uint8), g.order, h.order)


class BundleMap:
    """Dense table ``(a, b) -> p(a, b)`` of automorphisms of the right factor.

    Validated at construction: ``p(a, b) == p(b, a)^-1`` for every ordered pair
    and every entry preserves adjacency of ``right``.
    """

    def __init__(self, left_order: int, right: Graph, table: Mapping[tuple[int, int], Permutation]):
        self.left_order = left_order
        self.right = right
        ident = Permutation.identity(right.order)
        full: dict[tuple[int, int], Permutation] = {}
        for a in range(left_order):
            for b in range(left_order):
                p = table.get((a, b), ident)
                if not isinstance(p, Permutation):
                    p = Permutation(p)
                if p.degree != right.order:
                    raise InvalidInput(f"p({a},{b}) has degree {p.degree}, expected {right.order}")
                full[(a, b)] = p
        for (a, b), p in full.items():
            if full[(b, a)] != p.inverse():
                raise BundleInvolutionViolated(f"p({a},{b}) is not the inverse of p({b},{a})")
        checked: set[Permutation] = set()
        for (a, b), p in full.items():
            if p not in checked:
                if not preserves_adjacency(right, p):
                    raise NotAnAutomorphism(f"p({a},{b}) is not an automorphism of the right factor")
                checked.add(p)
        self.table = full

    @classmethod
    def from_function(
        cls, left_order: int, right: Graph, f: Callable[[int, int], Permutation | Sequence[int]]
    ) -> BundleMap:
        return cls(left_order, right, {(a, b): f(a, b) for a in range(left_order) for b in range(left_order)})

    def __call__(self, a: int, b: int) -> Permutation:
        return self.table[(a, b)]


def direct_bundle(g: Graph, h: Graph, p: BundleMap) -> ProductGraph:
    """``(a,x) ~ (b,y)`` iff ``a ~ b`` and ``x ~ y^{p(a,b)^-1}``."""
    if p.left_order != g.order or p.right.order != h.order:
        raise InvalidInput("bundle map does not match the factors")
    nh = h.order
    adj = np.zeros((g.order * nh, g.order * nh), dtype=np.uint8)
    hm = h.matrix
    for a, b in g.edges():
        for u, v in ((a, b), (b, a)):
            inv = np.asarray(p(u, v).inverse().images)
            # block[x, y] = hm[x, inv[y]]
            adj[u * nh : (u + 1) * nh, v * nh : (v + 1) * nh] = hm[:, inv]
    if not np.array_equal(adj, adj.T):
        raise AssertionError("bundle adjacency not symmetric")
    return ProductGraph(Graph.from_matrix(adj), g.order, nh)

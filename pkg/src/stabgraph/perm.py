"""Permutations, stabiliser chains and automorphism groups.

Composition convention: ``p * q`` applies ``p`` first, then ``q``, so
``(p * q)(x) == q(p(x))``.  This matches right-action notation
``x^{pq} = (x^p)^q``.
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass

import numpy as np

from .errors import DegreeMismatch
from .graph import Graph
from .search import Budget, automorphisms


class Permutation:
    """Bijection of ``0..n-1`` stored as its image tuple."""

    __slots__ = ("images",)

    def __init__(self, images: Iterable[int]):
        imgs = tuple(int(x) for x in images)
        if sorted(imgs) != list(range(len(imgs))):
            raise ValueError("images do not form a permutation")
        object.__setattr__(self, "images", imgs)

    def __setattr__(self, name, value):
        raise AttributeError("Permutation is immutable")

    @classmethod
    def identity(cls, n: int) -> Permutation:
        return cls(range(n))

    @classmethod
    def from_map(cls, n: int, f) -> Permutation:
        return cls(f(x) for x in range(n))

    @classmethod
    def from_cycles(cls, n: int, cycles: Iterable[Sequence[int]]) -> Permutation:
        img = list(range(n))
        for cyc in cycles:
            for i, x in enumerate(cyc):
                img[x] = cyc[(i + 1) % len(cyc)]
        return cls(img)

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, x: int) -> int:
        return self.images[x]

    def __mul__(self, other: Permutation) -> Permutation:
        if other.degree != self.degree:
            raise DegreeMismatch(f"degrees {self.degree} and {other.degree} differ")
        return Permutation(other.images[x] for x in self.images)

    def compose(self, other: Permutation) -> Permutation:
        """``self`` then ``other``."""
        return self * other

    def inverse(self) -> Permutation:
        inv = [0] * self.degree
        for x, y in enumerate(self.images):
            inv[y] = x
        return Permutation(inv)

    def is_identity(self) -> bool:
        return all(x == y for x, y in enumerate(self.images))

    def fixed_points(self) -> list[int]:
        return [x for x, y in enumerate(self.images) if x == y]

    def is_derangement(self) -> bool:
        return not self.fixed_points()

    def to_json(self) -> list[int]:
        return list(self.images)

    def as_array(self) -> np.ndarray:
        return np.array(self.images, dtype=np.int64)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Permutation) and self.images == other.images

    def __lt__(self, other: Permutation) -> bool:
        return self.images < other.images

    def __hash__(self) -> int:
        return hash(self.images)

    def __repr__(self) -> str:
        return f"Permutation({list(self.images)})"


def preserves_adjacency(g: Graph, p: Permutation | Sequence[int]) -> bool:
    img = p.images if isinstance(p, Permutation) else p
    if len(img) != g.order:
        return False
    a = g.matrix
    idx = np.asarray(img)
    return bool(np.array_equal(a[np.ix_(idx, idx)], a))


# --- stabiliser chains -------------------------------------------------------


def _mul(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    return q[p]


def _inv(p: np.ndarray) -> np.ndarray:
    r = np.empty_like(p)
    r[p] = np.arange(p.shape[0], dtype=p.dtype)
    return r


class StabChain:
    """Deterministic Schreier-Sims stabiliser chain on arrays.

    The base starts with ``base_prefix`` (levels with trivial basic orbit are
    kept, so a full prefix pins the base exactly).  Further base points are
    chosen greedily: among points moved by the new strong generator, the one
    with the largest orbit under the level's generators, ties to the smallest.
    """

    def __init__(
        self,
        degree: int,
        generators: Iterable,
        base_prefix: Sequence[int] = (),
        known_order: int | None = None,
    ):
        self.degree = degree
        self._known = known_order
        self.identity = np.arange(degree, dtype=np.int64)
        gens = []
        for g in generators:
            a = g.as_array() if isinstance(g, Permutation) else np.asarray(g, dtype=np.int64)
            if a.shape != (degree,):
                raise DegreeMismatch(f"generator of degree {a.shape[0]} in a group of degree {degree}")
            if not np.array_equal(np.sort(a), self.identity):
                raise ValueError("generator is not a permutation")
            if not np.array_equal(a, self.identity):
                gens.append(a)
        self.base: list[int] = [int(x) for x in dict.fromkeys(base_prefix)]
        self.strong: list[np.ndarray] = []
        self._level_gens: list[list[np.ndarray]] = []
        self._trans: list[dict[int, np.ndarray]] = []
        self._tinv: list[dict[int, np.ndarray]] = []
        self._refresh()
        for g in gens:
            if self._done():
                break
            if not self.contains(g):
                self._add_strong(g)
                self._schreier_sims()
        if known_order is not None and self.order() != known_order:
            raise AssertionError("stabiliser chain order disagrees with the known order")

    def _done(self) -> bool:
        # with a known group order the chain is complete once the orders agree
        return self._known is not None and self.order() == self._known

    @staticmethod
    def _orbit(pt: int, gens: list[np.ndarray], ident: np.ndarray) -> dict[int, np.ndarray]:
        trans = {pt: ident}
        queue = [pt]
        for x in queue:
            for g in gens:
                y = int(g[x])
                if y not in trans:
                    trans[y] = _mul(trans[x], g)
                    queue.append(y)
        return trans

    def _new_point(self, h: np.ndarray) -> int:
        moved = [x for x in range(self.degree) if int(h[x]) != x and x not in self.base]
        gens = [g for g in self.strong if all(int(g[b]) == b for b in self.base)] + [h]
        best, best_len = moved[0], -1
        for x in moved:
            k = len(self._orbit(x, gens, self.identity))
            if k > best_len:
                best, best_len = x, k
        return best

    def _refresh(self, start: int = 0) -> None:
        del self._level_gens[start:], self._trans[start:], self._tinv[start:]
        for i in range(start, len(self.base)):
            fixed = self.base[:i]
            gens = [g for g in self.strong if all(int(g[b]) == b for b in fixed)]
            self._level_gens.append(gens)
            trans = self._orbit(self.base[i], gens, self.identity)
            self._trans.append(trans)
            self._tinv.append({x: _inv(u) for x, u in trans.items()})

    def _add_strong(self, h: np.ndarray) -> None:
        if all(int(h[b]) == b for b in self.base):
            self.base.append(self._new_point(h))
        self.strong.append(h)
        self._refresh()

    def _sift(self, g: np.ndarray, start: int = 0) -> tuple[np.ndarray, int]:
        for i in range(start, len(self.base)):
            uinv = self._tinv[i].get(int(g[self.base[i]]))
            if uinv is None:
                return g, i
            g = uinv[g]
        return g, len(self.base)

    def _schreier_sims(self) -> None:
        i = len(self.base) - 1
        while i >= 0:
            if self._done():
                return
            found = None
            trans, tinv = self._trans[i], self._tinv[i]
            for x, u in list(trans.items()):
                for s in self._level_gens[i]:
                    y = int(s[x])
                    sch = tinv[y][s[u]]
                    h, j = self._sift(sch, i + 1)
                    if j < len(self.base) or not np.array_equal(h, self.identity):
                        found = (h, j)
                        break
                if found:
                    break
            if found is None:
                i -= 1
                continue
            h, j = found
            self._add_strong(h)
            i = max(j, i) if j < len(self.base) else len(self.base) - 1

    # --- queries ---

    def order(self) -> int:
        out = 1
        for t in self._trans:
            out *= len(t)
        return out

    @property
    def orbit_sizes(self) -> list[int]:
        return [len(t) for t in self._trans]

    def transversal(self, level: int) -> dict[int, np.ndarray]:
        return self._trans[level]

    def contains(self, g) -> bool:
        a = g.as_array() if isinstance(g, Permutation) else np.asarray(g, dtype=np.int64)
        if a.shape != (self.degree,):
            return False
        h, j = self._sift(a)
        return j == len(self.base) and bool(np.array_equal(h, self.identity))

    def strong_generators(self, level: int) -> list[np.ndarray]:
        """Strong generators of the pointwise stabiliser of ``base[:level]``."""
        if level < len(self._level_gens):
            return self._level_gens[level]
        fixed = self.base[:level]
        return [g for g in self.strong if all(int(g[b]) == b for b in fixed)]

    def elements(self) -> Iterator[np.ndarray]:
        """Every group element once (``u_k ... u_0`` products, deepest first)."""

        def rec(i: int, acc: np.ndarray):
            if i < 0:
                yield acc
                return
            for u in self._trans[i].values():
                yield from rec(i - 1, _mul(acc, u))

        yield from rec(len(self.base) - 1, self.identity)


def group_order(degree: int, generators: Iterable) -> int:
    """Exact order of the group generated by ``generators`` on ``degree`` points."""
    return StabChain(degree, list(generators)).order()


@dataclass(frozen=True)
class PermGroup:
    degree: int
    generators: tuple[Permutation, ...]
    order: int

    def __post_init__(self):
        for g in self.generators:
            if g.degree != self.degree:
                raise DegreeMismatch(f"generator degree {g.degree} != {self.degree}")

    def chain(self, base_prefix: Sequence[int] = ()) -> StabChain:
        return StabChain(self.degree, self.generators, base_prefix)

    def orbit(self, x: int) -> set[int]:
        orb, frontier = {x}, [x]
        for y in frontier:
            for g in self.generators:
                z = g(y)
                if z not in orb:
                    orb.add(z)
                    frontier.append(z)
        return orb

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "order": self.order,
            "generators": [g.to_json() for g in self.generators],
        }


def automorphism_group(
    g: Graph, colors: Sequence[int] | None = None, budget: Budget | int | None = None
) -> PermGroup:
    """Colour-preserving automorphism group of ``g`` (all of ``Aut(g)`` by default)."""
    if g.order < 1:
        raise ValueError("graph must have at least one vertex")
    res = automorphisms(g.matrix, colors, budget)
    gens = tuple(Permutation(x.tolist()) for x in res.generators)
    for p in gens:
        if not preserves_adjacency(g, p):
            raise AssertionError("automorphism search returned a non-automorphism")
        if colors is not None and any(colors[p(v)] != colors[v] for v in range(g.order)):
            raise AssertionError("automorphism search broke a colour class")
    return PermGroup(g.order, gens, res.order)

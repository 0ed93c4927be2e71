"""Stability verdicts, two-fold morphisms and their searches.

A graph is stable when ``|Aut(g x K2)| == 2 |Aut(g)|``.  TF-morphisms
``(alpha, beta)`` are read off the layer-preserving automorphisms of the
double cover: vertex ``(v, layer)`` has index ``2v + layer`` and a
layer-preserving automorphism sends ``2v -> 2 alpha(v)`` and
``2v+1 -> 2 beta(v) + 1``.
"""

from __future__ import annotations

import enum
from collections.abc import Iterable, Sequence
from dataclasses import dataclass

import numpy as np

from .errors import ComplementTrivial, DegreeMismatch, InvalidInput, SearchBudgetExceeded
from .graph import Graph, classify_basic, complement, complete_graph
from .perm import Permutation, StabChain
from .products import ProductKind, product
from .search import Budget, as_budget, automorphisms


class Role(enum.Enum):
    TF = "TF"
    TFS = "TFS"


@dataclass(frozen=True)
class TwoFoldPair:
    alpha: Permutation
    beta: Permutation
    role: Role = Role.TF

    def __post_init__(self):
        if self.alpha.degree != self.beta.degree:
            raise DegreeMismatch("alpha and beta have different degrees")

    @property
    def nontrivial(self) -> bool:
        return self.alpha != self.beta

    def to_json(self) -> dict:
        return {"role": self.role.value, "alpha": self.alpha.to_json(), "beta": self.beta.to_json()}


class Verdict(enum.Enum):
    STABLE = "Stable"
    TRIVIALLY_UNSTABLE = "TriviallyUnstable"
    NONTRIVIALLY_UNSTABLE = "NontriviallyUnstable"


class TrivialReason(enum.Enum):
    DISCONNECTED = "Disconnected"
    RTHICK = "RThick"
    BIPARTITE = "BipartiteWithNontrivialAut"


@dataclass(frozen=True)
class StabilityVerdict:
    verdict: Verdict
    aut_order: int
    double_cover_aut_order: int
    reason: TrivialReason | None = None

    @property
    def stable(self) -> bool:
        return self.verdict is Verdict.STABLE

    @property
    def unstable(self) -> bool:
        return not self.stable

    @property
    def label(self) -> str:
        if self.reason is None:
            return self.verdict.value
        return f"{self.verdict.value}({self.reason.value})"

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict.value,
            "reason": None if self.reason is None else self.reason.value,
            "aut_order": self.aut_order,
            "double_cover_aut_order": self.double_cover_aut_order,
        }


class Outcome(enum.Enum):
    YES = "Yes"
    NO = "No"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class SearchOutcome:
    outcome: Outcome
    witness: object = None
    spent: int = 0

    @classmethod
    def yes(cls, witness=None, spent: int = 0) -> SearchOutcome:
        return cls(Outcome.YES, witness, spent)

    @classmethod
    def no(cls, spent: int = 0) -> SearchOutcome:
        return cls(Outcome.NO, None, spent)

    @classmethod
    def inconclusive(cls, spent: int = 0) -> SearchOutcome:
        return cls(Outcome.INCONCLUSIVE, None, spent)

    @property
    def is_yes(self) -> bool:
        return self.outcome is Outcome.YES

    @property
    def is_no(self) -> bool:
        return self.outcome is Outcome.NO

    def __bool__(self) -> bool:
        return self.is_yes


def double_cover(g: Graph) -> Graph:
    return product(g, complete_graph(2), ProductKind.DIRECT).graph


def stability_status(g: Graph, budget: Budget | int | None = None) -> StabilityVerdict:
    if g.order < 1:
        raise InvalidInput("graph must have at least one vertex")
    budget = as_budget(budget, "stability")
    aut = automorphisms(g.matrix, None, budget).order
    dc = automorphisms(double_cover(g).matrix, None, budget).order
    if dc < 2 * aut:
        raise AssertionError("Aut(g) x Z2 does not embed in Aut(g x K2)")
    if dc == 2 * aut:
        return StabilityVerdict(Verdict.STABLE, aut, dc)
    prof = classify_basic(g)
    if not prof.connected:
        reason = TrivialReason.DISCONNECTED
    elif not prof.r_thin:
        reason = TrivialReason.RTHICK
    elif prof.bipartite and aut > 1:
        reason = TrivialReason.BIPARTITE
    else:
        return StabilityVerdict(Verdict.NONTRIVIALLY_UNSTABLE, aut, dc)
    return StabilityVerdict(Verdict.TRIVIALLY_UNSTABLE, aut, dc, reason)


@dataclass(frozen=True)
class PairStability:
    stable: bool
    product_aut_order: int
    left_aut_order: int
    right_aut_order: int

    def to_json(self) -> dict:
        return {
            "verdict": "Stable" if self.stable else "Unstable",
            "product_aut_order": self.product_aut_order,
            "left_aut_order": self.left_aut_order,
            "right_aut_order": self.right_aut_order,
        }


def pair_stability(g: Graph, h: Graph, budget: Budget | int | None = None) -> PairStability:
    """Compare ``|Aut(g x h)|`` with ``|Aut(g)| |Aut(h)|``."""
    budget = as_budget(budget, "pair stability")
    pg = product(g, h, ProductKind.DIRECT).graph
    big = automorphisms(pg.matrix, None, budget).order
    a = automorphisms(g.matrix, None, budget).order
    b = automorphisms(h.matrix, None, budget).order
    return PairStability(big == a * b, big, a, b)


# --- two-fold morphisms -------------------------------------------------------


def _check_degree(g: Graph, pair: TwoFoldPair) -> None:
    if pair.alpha.degree != g.order or pair.beta.degree != g.order:
        raise DegreeMismatch(f"permutations of degree {pair.alpha.degree} on a graph of order {g.order}")


def verify_two_fold(g: Graph, pair: TwoFoldPair) -> bool:
    _check_degree(g, pair)
    a = g.matrix.astype(bool)
    al = np.asarray(pair.alpha.images)
    be = np.asarray(pair.beta.images)
    # img[u, v] = (u^alpha ~ v^beta)
    img = a[np.ix_(al, be)]
    if pair.role is Role.TF:
        return bool(np.all(img[a]))
    same = al[:, None] == be[None, :]
    if not np.all(img[np.arange(g.order), np.arange(g.order)]):
        return False
    return bool(np.all((img | same)[a]))


def tf_converse_holds(g: Graph, pair: TwoFoldPair) -> bool:
    """``u^alpha ~ v^beta`` implies ``u ~ v`` on every pair."""
    a = g.matrix.astype(bool)
    img = a[np.ix_(np.asarray(pair.alpha.images), np.asarray(pair.beta.images))]
    return bool(np.all(a[img]))


def split_layers(x: np.ndarray, n: int) -> tuple[Permutation, Permutation]:
    alpha = Permutation((x[0::2] // 2).tolist())
    beta = Permutation(((x[1::2] - 1) // 2).tolist())
    return alpha, beta


def is_diagonal(x: np.ndarray) -> bool:
    return bool(np.array_equal(x[0::2] + 1, x[1::2]))


def _layer_colors(n: int, subset: Iterable[int] | None) -> list[int]:
    member = set(subset) if subset is not None else set()
    return layer_colors([1 if v in member else 0 for v in range(n)])


def layer_colors(vertex_colors: Sequence[int]) -> list[int]:
    """Colours of the two-layer index ``2v + layer`` from per-vertex colours."""
    k = max(vertex_colors, default=0) + 1
    return [layer * k + vertex_colors[v] for v in range(len(vertex_colors)) for layer in (0, 1)]


def _least_nondiagonal(chain: StabChain, base_len: int) -> np.ndarray | None:
    """Lexicographically least non-diagonal element, base order being priority."""
    diag_from = [False] * (base_len + 1)
    diag_from[base_len] = True
    for i in range(base_len - 1, -1, -1):
        diag_from[i] = diag_from[i + 1] and all(is_diagonal(s) for s in chain.strong_generators(i))
    if diag_from[0]:
        return None
    x = chain.identity
    for i in range(base_len):
        b = chain.base[i]
        trans = chain.transversal(i)
        best = None
        for c, u in trans.items():
            xp = x[u]  # u then x
            if diag_from[i + 1] and is_diagonal(xp):
                continue
            if best is None or int(xp[b]) < int(best[b]):
                best = xp
        x = best
    return x


def least_nondiagonal(adj: np.ndarray, colors: Sequence[int], budget: Budget) -> np.ndarray | None:
    """Least non-diagonal colour-preserving automorphism of a two-layer graph.

    ``adj`` has vertex ``(v, layer)`` at ``2v + layer`` and ``colors`` must
    separate the layers.  An element is diagonal when it acts identically on
    both layers.  Elements are compared by their images of ``0, 2, 4, ...``
    then ``1, 3, 5, ...``.  Raises :class:`SearchBudgetExceeded`.
    """
    res = automorphisms(adj, colors, budget)
    if all(is_diagonal(gen) for gen in res.generators):
        return None
    size = adj.shape[0]
    base = list(range(0, size, 2)) + list(range(1, size, 2))
    chain = StabChain(size, res.generators, base_prefix=base, known_order=res.order)
    return _least_nondiagonal(chain, size)


def find_tf_morphism(
    g: Graph,
    require_nontrivial: bool = True,
    parity_constraint: Iterable[int] | None = None,
    budget: Budget | int | None = None,
) -> SearchOutcome:
    """Least TF-morphism (by alpha images, then beta images) of ``g``.

    ``parity_constraint`` is a vertex subset that both permutations must map
    onto itself.  With ``require_nontrivial`` the pair must have
    ``alpha != beta``.
    """
    budget = as_budget(budget, "TF-morphism search")
    n = g.order
    subset = None if parity_constraint is None else sorted(set(parity_constraint))
    if not require_nontrivial:
        ident = Permutation.identity(n)
        return SearchOutcome.yes(TwoFoldPair(ident, ident), 0)
    try:
        x = least_nondiagonal(double_cover(g).matrix, _layer_colors(n, subset), budget)
    except SearchBudgetExceeded:
        return SearchOutcome.inconclusive(budget.used)
    if x is None:
        return SearchOutcome.no(budget.used)
    alpha, beta = split_layers(x, n)
    pair = TwoFoldPair(alpha, beta, Role.TF)
    if not verify_two_fold(g, pair) or not pair.nontrivial:
        raise AssertionError("TF search produced an invalid witness")
    if subset is not None:
        ss = set(subset)
        if {alpha(v) for v in ss} != ss or {beta(v) for v in ss} != ss:
            raise AssertionError("TF witness breaks the parity constraint")
    return SearchOutcome.yes(pair, budget.used)


def _tfs_dfs(chain: StabChain, budget: Budget) -> np.ndarray | None:
    """Least element with ``x[2u] // 2 != x[2u+1] // 2`` for every ``u``."""
    depth = len(chain.base)

    def rec(i: int, x: np.ndarray):
        if i == depth:
            return x
        budget.spend()
        b = chain.base[i]
        cands = sorted((int(x[u][b]), k, u) for k, u in enumerate(chain.transversal(i).values()))
        for _, _, u in cands:
            xp = x[u]
            if b % 2 == 1 and xp[b - 1] // 2 == xp[b] // 2:
                continue
            found = rec(i + 1, xp)
            if found is not None:
                return found
        return None

    return rec(0, chain.identity)


def find_tfs_morphism(g: Graph, budget: Budget | int | None = None) -> SearchOutcome:
    """Least TFS-morphism, found as a complement TF-morphism with derangement ``alpha beta^-1``.

    Candidates are ordered by ``(alpha(0), beta(0), alpha(1), beta(1), ...)``.
    """
    if g.order < 1:
        raise ComplementTrivial("graph has no vertices")
    if g.order == 1:
        return SearchOutcome.no()
    budget = as_budget(budget, "TFS-morphism search")
    n = g.order
    gc = complement(g)
    try:
        res = automorphisms(double_cover(gc).matrix, _layer_colors(n, None), budget)
        chain = StabChain(2 * n, res.generators, base_prefix=list(range(2 * n)), known_order=res.order)
        x = _tfs_dfs(chain, budget)
    except SearchBudgetExceeded:
        return SearchOutcome.inconclusive(budget.used)
    if x is None:
        return SearchOutcome.no(budget.used)
    alpha, beta = split_layers(x, n)
    pair = TwoFoldPair(alpha, beta, Role.TFS)
    if not verify_two_fold(g, pair):
        raise AssertionError("TFS search produced an invalid witness")
    return SearchOutcome.yes(pair, budget.used)

"""Instability conditions for circulant graphs and the product constructions.

Subgroups of ``Z_n`` are indexed by the divisors ``d`` of ``n``
(``<d> = {0, d, 2d, ...}``) and always iterated with ``d`` ascending, i.e.
largest subgroup first.  Every ``Yes`` carries a witness that is re-checked
by set arithmetic, an adjacency check or ``verify_two_fold`` before return.
"""

from __future__ import annotations

import itertools
import math
from collections.abc import Iterable
from dataclasses import dataclass, field

import numpy as np

from .errors import BadParameters, HypothesisNotSatisfied, SearchBudgetExceeded
from .graph import (
    CirculantSpec,
    Graph,
    cayley_cyclic,
    circulant,
    complement,
    complete_graph,
    cycle_graph,
    is_isomorphism,
    isomorphism,
)
from .perm import Permutation, preserves_adjacency
from .products import BundleMap, ProductGraph, ProductKind, direct_bundle, product
from .search import Budget, as_budget, automorphisms
from .stability import (
    Outcome,
    SearchOutcome,
    StabilityVerdict,
    TwoFoldPair,
    Verdict,
    double_cover,
    find_tf_morphism,
    layer_colors,
    least_nondiagonal,
    split_layers,
    stability_status,
    verify_two_fold,
)

# --- subgroups ---------------------------------------------------------------


@dataclass(frozen=True)
class Subgroup:
    """The subgroup ``<d>`` of ``Z_n`` for a divisor ``d`` of ``n``."""

    n: int
    d: int

    def __post_init__(self):
        d = math.gcd(self.d % self.n, self.n) or self.n
        object.__setattr__(self, "d", d)

    @classmethod
    def generated(cls, n: int, gens: Iterable[int]) -> Subgroup:
        d = n
        for x in gens:
            d = math.gcd(d, x % n)
        return cls(n, d)

    @property
    def order(self) -> int:
        return self.n // self.d

    @property
    def elements(self) -> frozenset[int]:
        return frozenset(range(0, self.n, self.d))

    @property
    def trivial(self) -> bool:
        return self.d == self.n

    def doubled(self) -> Subgroup:
        """``2K``."""
        return Subgroup(self.n, 2 * self.d)

    def odd_part(self) -> frozenset[int]:
        """``K_o = K \\ 2K``."""
        return self.elements - self.doubled().elements

    def __add__(self, other: Subgroup) -> Subgroup:
        return Subgroup(self.n, math.gcd(self.d, other.d))

    def contains(self, other: Subgroup) -> bool:
        return other.d % self.d == 0

    def __str__(self) -> str:
        return f"<{self.d % self.n}>"

    def to_json(self) -> dict:
        return {"generator": self.d % self.n, "order": self.order}


def subgroups(n: int) -> list[Subgroup]:
    """All subgroups of ``Z_n``, divisors ascending (largest subgroup first)."""
    return [Subgroup(n, d) for d in range(1, n + 1) if n % d == 0]


@dataclass(frozen=True)
class SubgroupWitness:
    """Subgroups ``H`` and ``K`` with the derived sets used by the lemmas."""

    h: Subgroup
    k: Subgroup

    @property
    def k_o(self) -> frozenset[int]:
        return self.k.odd_part()

    @property
    def l(self) -> Subgroup:  # noqa: E743
        return self.k + self.h

    @property
    def l_o(self) -> frozenset[int]:
        return self.l.odd_part()

    def to_json(self) -> dict:
        return {"H": self.h.to_json(), "K": self.k.to_json()}


def _shift(xs: Iterable[int], t: int, n: int) -> frozenset[int]:
    return frozenset((x + t) % n for x in xs)


def _sumset(xs: Iterable[int], ys: Iterable[int], n: int) -> frozenset[int]:
    ys = list(ys)
    return frozenset((x + y) % n for x in xs for y in ys)


# --- the four classical conditions -------------------------------------------


@dataclass
class ConditionReport:
    spec: CirculantSpec
    outcomes: dict[str, SearchOutcome] = field(default_factory=dict)

    def __getitem__(self, key: str) -> SearchOutcome:
        return self.outcomes[key]

    def flags(self) -> dict[str, str]:
        return {k: v.outcome.value for k, v in self.outcomes.items()}

    def to_json(self) -> dict:
        out = {}
        for k, v in self.outcomes.items():
            out[k] = {"outcome": v.outcome.value, "witness": witness_json(v.witness)}
        return {"n": self.spec.n, "s": list(self.spec.s), "conditions": out}


def witness_json(w):
    if w is None:
        return None
    if hasattr(w, "to_json"):
        return w.to_json()
    if isinstance(w, dict):
        return {k: witness_json(v) for k, v in w.items()}
    if isinstance(w, (list, tuple)):
        return [witness_json(v) for v in w]
    if isinstance(w, (frozenset, set)):
        return sorted(w)
    if isinstance(w, np.ndarray):
        return w.tolist()
    if isinstance(w, np.integer):
        return int(w)
    return w


def _c1(spec: CirculantSpec) -> SearchOutcome:
    n, se = spec.n, spec.s_even
    for h in range(2, n, 2):
        if _shift(se, h, n) == se:
            return SearchOutcome.yes({"h": h})
    return SearchOutcome.no()


def _c2(spec: CirculantSpec) -> SearchOutcome:
    n, s, so = spec.n, spec.set, spec.s_odd
    if n % 4:
        return SearchOutcome.no()
    for h in range(1, n, 2):
        if _shift(so, 2 * h, n) != so:
            continue
        if all((x + h) % n in s for x in s if x % 4 in (0, (-h) % 4)):
            return SearchOutcome.yes({"h": h})
    return SearchOutcome.no()


def c3_prime_holds(spec: CirculantSpec, hsub: Subgroup) -> dict | None:
    n, s = spec.n, spec.set
    hel = hsub.elements
    r = sorted(x for x in s if not _shift(hel, x, n) <= s)
    if not r:
        return None
    d = n
    for x in r:
        d = math.gcd(d, x)
    if (n // d) % 2:
        return None
    if any((x // d) % 2 == 0 for x in r):
        return None
    # H not inside dZ_n, or H inside 2dZ_n
    if hsub.d % d != 0 or hsub.d % (2 * d) == 0:
        return {"H": hsub.to_json(), "R": r, "d": d}
    return None


def _c3(spec: CirculantSpec) -> SearchOutcome:
    for hsub in subgroups(spec.n):
        w = c3_prime_holds(spec, hsub)
        if w is not None:
            return SearchOutcome.yes(w)
    return SearchOutcome.no()


def _c4(spec: CirculantSpec) -> SearchOutcome:
    n, s, m = spec.n, spec.set, spec.n // 2
    for r in range(1, n):
        if math.gcd(r, n) == 1 and frozenset((m + r * x) % n for x in s) == s:
            return SearchOutcome.yes({"r": r})
    return SearchOutcome.no()


def wilson_conditions(spec: CirculantSpec) -> ConditionReport:
    rep = ConditionReport(spec)
    if spec.n % 2:
        for key in ("C1", "C2'", "C3'", "C4"):
            rep.outcomes[key] = SearchOutcome.no()
        return rep
    rep.outcomes["C1"] = _c1(spec)
    rep.outcomes["C2'"] = _c2(spec)
    rep.outcomes["C3'"] = _c3(spec)
    rep.outcomes["C4"] = _c4(spec)
    return rep


# --- three later sufficient conditions ---------------------------------------


def t32_clauses(spec: CirculantSpec, hsub: Subgroup, ksub: Subgroup) -> list[int]:
    """Which of the clauses (1), (2) hold for the pair ``(H, K)``."""
    n, s = spec.n, spec.set
    if hsub.trivial or ksub.trivial or ksub.order % 2:
        return []
    hel, ko = hsub.elements, ksub.odd_part()
    out = []
    if _sumset(s, hel, n) <= s | _sumset(ko, hel, n) and not (hel & ko):
        out.append(1)
    if _sumset(s - ko, hel, n) <= s | ko and (hsub.order != 2 or ksub.order % 4 == 0):
        out.append(2)
    return out


def hmm_t32(spec: CirculantSpec, budget: Budget | int | None = None) -> SearchOutcome:
    if spec.n % 2:
        return SearchOutcome.no()
    for hsub in subgroups(spec.n):
        if hsub.trivial:
            continue
        for ksub in subgroups(spec.n):
            clauses = t32_clauses(spec, hsub, ksub)
            if clauses:
                return SearchOutcome.yes({"H": hsub, "K": ksub, "clause": clauses[0]})
    return SearchOutcome.no()


def shifted_spec(spec: CirculantSpec) -> CirculantSpec | None:
    """``S + m``, or ``None`` when it contains 0 (that is, when ``m`` is in ``S``)."""
    m = spec.m
    if m in spec.set:
        return None
    return CirculantSpec(spec.n, tuple(sorted(_shift(spec.s, m, spec.n))))


def hmm_p37(spec: CirculantSpec, budget: Budget | int | None = None) -> SearchOutcome:
    if spec.n % 2:
        return SearchOutcome.no()
    target = shifted_spec(spec)
    if target is None:
        return SearchOutcome.no()
    b = as_budget(budget, "isomorphism search")
    try:
        phi = isomorphism(spec, target, budget=b)
    except SearchBudgetExceeded:
        return SearchOutcome.inconclusive(b.used)
    if phi is None:
        return SearchOutcome.no(b.used)
    g, h = circulant(spec), circulant(target)
    if not is_isomorphism(g, h, phi.images):
        raise AssertionError("invalid isomorphism witness")
    return SearchOutcome.yes({"shifted": list(target.s), "isomorphism": phi}, b.used)


def even_subgraph_spec(spec: CirculantSpec) -> tuple[int, list[int]]:
    """``Cay(2Z_n, S_e)`` relabelled ``v -> v/2`` as a circulant on ``Z_{n/2}``."""
    half = spec.n // 2
    return half, sorted(x // 2 for x in spec.s_even)


def hmm_p312(spec: CirculantSpec, budget: Budget | int | None = None) -> SearchOutcome:
    n = spec.n
    if n % 2:
        return SearchOutcome.no()
    budget = as_budget(budget, "even-subgraph TF search")
    s, so = spec.set, spec.s_odd
    half, conn = even_subgraph_spec(spec)
    ge = cayley_cyclic(half, conn)
    inconclusive = False
    for hsub in subgroups(n):
        hel = hsub.elements
        if not all(_shift(hel, v, n) <= s for v in so):
            continue
        # displacements in H between even residues lie in H \cap 2Z_n = <lcm(d, 2)>
        step = (hsub.d * 2 // math.gcd(hsub.d, 2)) // 2
        if step >= half:
            continue
        colors = [i % step for i in range(half)]
        try:
            x = least_nondiagonal(double_cover(ge).matrix, layer_colors(colors), budget)
        except SearchBudgetExceeded:
            inconclusive = True
            continue
        if x is None:
            continue
        alpha, beta = split_layers(x, half)
        pair = TwoFoldPair(alpha, beta)
        if not verify_two_fold(ge, pair) or alpha == beta:
            raise AssertionError("invalid even-subgraph TF witness")
        for p in (alpha, beta):
            if any(((2 * p(i) - 2 * i) % n) not in hel for i in range(half)):
                raise AssertionError("displacement outside H")
        return SearchOutcome.yes(
            {
                "H": hsub,
                "alpha": [2 * alpha(i) for i in range(half)],
                "beta": [2 * beta(i) for i in range(half)],
            },
            budget.used,
        )
    return SearchOutcome.inconclusive(budget.used) if inconclusive else SearchOutcome.no(budget.used)


def _two_layer(within: np.ndarray, cross: np.ndarray) -> np.ndarray:
    """Graph on ``2v + layer`` with ``within`` in both layers and ``cross`` between them."""
    n = within.shape[0]
    adj = np.zeros((2 * n, 2 * n), dtype=np.uint8)
    adj[0::2, 0::2] = within
    adj[1::2, 1::2] = within
    adj[0::2, 1::2] = cross
    adj[1::2, 0::2] = cross.T
    return adj


def ncon_check(spec: CirculantSpec, budget: Budget | int | None = None) -> SearchOutcome:
    """Does ``Cay(Z_n, (S - {m}) + m)`` have an automorphism fixing 0 and moving m?"""
    n = spec.n
    if n % 2:
        return SearchOutcome.no()
    m = spec.m
    conn = _shift(spec.set - {m}, m, n)
    if 0 in conn:
        raise AssertionError("shifted connection set contains 0")
    sigma_graph = cayley_cyclic(n, conn)
    budget = as_budget(budget, "ncon automorphism search")
    colors = [1 if v == 0 else 0 for v in range(n)]
    try:
        res = automorphisms(sigma_graph.matrix, colors, budget)
    except SearchBudgetExceeded:
        return SearchOutcome.inconclusive(budget.used)
    for gen in res.generators:
        if int(gen[m]) != m:
            sigma = Permutation(gen.tolist())
            if sigma(0) != 0 or not preserves_adjacency(sigma_graph, sigma):
                raise AssertionError("invalid ncon witness")
            return SearchOutcome.yes({"sigma": sigma, "pair": ncon_pair(spec, sigma)}, budget.used)
    return SearchOutcome.no(budget.used)


def ncon_pair(spec: CirculantSpec, sigma: Permutation) -> TwoFoldPair:
    """The TF-pair ``x -> x^sigma + m``, ``x -> (x + m)^sigma`` built from a shift automorphism."""
    n, m = spec.n, spec.m
    alpha = Permutation((sigma(x) + m) % n for x in range(n))
    beta = Permutation(sigma((x + m) % n) for x in range(n))
    return TwoFoldPair(alpha, beta)


def theorem_hmmtype(spec: CirculantSpec, budget: Budget | int | None = None) -> SearchOutcome:
    """All satisfied clauses among (i), (ii), (iii); the witness maps clause to evidence."""
    n = spec.n
    if n % 2:
        return SearchOutcome.no()
    s = spec.set
    found: dict[str, object] = {}
    for ksub in subgroups(n):
        if ksub.order % 2:
            continue
        ko = ksub.odd_part()
        base = s - ko
        for hsub in subgroups(n):
            if hsub.trivial or hsub.order % 2 == 0 or not ksub.contains(hsub):
                continue
            if _sumset(base, hsub.elements, n) == base:
                found["i"] = {"H": hsub, "K": ksub}
                break
        if "i" in found:
            break
    p37 = hmm_p37(spec, budget)
    if p37.is_yes:
        found["ii"] = p37.witness
    nc = ncon_check(spec, budget)
    if nc.is_yes:
        found["iii"] = nc.witness
    if found:
        return SearchOutcome.yes({"clauses": sorted(found), **found})
    if Outcome.INCONCLUSIVE in (p37.outcome, nc.outcome):
        return SearchOutcome.inconclusive()
    return SearchOutcome.no()


@dataclass(frozen=True)
class OldToNew:
    hypothesis: bool
    sigma: Permutation | None
    verified: bool

    def __bool__(self) -> bool:
        return self.hypothesis and self.verified

    def to_json(self) -> dict:
        return {
            "hypothesis": self.hypothesis,
            "verified": self.verified,
            "sigma": None if self.sigma is None else self.sigma.to_json(),
        }


def oldtonew_check(spec: CirculantSpec, h: int, k: Subgroup) -> OldToNew:
    """Hypothesis ``(S - K_o) + <h>`` inside ``S u K_o`` and the explicit automorphism."""
    n = spec.n
    if h <= 0 or n != 4 * h:
        raise BadParameters(f"need n = 4h, got n={n}, h={h}")
    if k.n != n or k.order % 4 != 2:
        raise BadParameters(f"|K| = {k.order} is not twice an odd integer")
    s = spec.set
    ko = k.odd_part()
    hgrp = Subgroup(n, h).elements
    if not _sumset(s - ko, hgrp, n) <= s | ko:
        return OldToNew(False, None, False)
    two_k = k.doubled().elements
    h_coset = _shift(two_k, h, n)
    img = []
    for x in range(n):
        if x in two_k:
            img.append(x)
        elif x in h_coset:
            img.append((x + 2 * h) % n)
        else:
            img.append((x - h) % n)
    sigma = Permutation(img)
    star = cayley_cyclic(n, _shift(s - {2 * h}, 2 * h, n))
    ok = preserves_adjacency(star, sigma) and sigma(0) == 0 and sigma(2 * h) != 2 * h
    return OldToNew(True, sigma, ok)


def oldtonew_any(spec: CirculantSpec) -> SearchOutcome:
    """Search ``K`` (twice-odd order) for which the oldtonew hypothesis holds, with ``h = n/4``."""
    n = spec.n
    if n % 4:
        return SearchOutcome.no()
    h = n // 4
    for ksub in subgroups(n):
        if ksub.order % 4 != 2:
            continue
        res = oldtonew_check(spec, h, ksub)
        if res.hypothesis:
            if not res.verified:
                raise AssertionError(f"oldtonew automorphism failed for {spec} with K={ksub}")
            return SearchOutcome.yes({"h": h, "K": ksub, "sigma": res.sigma})
    return SearchOutcome.no()


@dataclass(frozen=True)
class EquiReport:
    clause: str
    verified: bool
    detail: dict

    def to_json(self) -> dict:
        return {"clause": self.clause, "verified": self.verified, "detail": witness_json(self.detail)}


def equi_cross_check(spec: CirculantSpec, hsub: Subgroup, ksub: Subgroup, budget=None) -> EquiReport:
    n, s, m = spec.n, spec.set, spec.n // 2
    if n % 2 or not t32_clauses(spec, hsub, ksub):
        raise HypothesisNotSatisfied(f"({hsub}, {ksub}) does not satisfy either clause for {spec}")
    w = SubgroupWitness(hsub, ksub)
    hel = hsub.elements
    if m in hel - w.k_o:
        out = hmm_p37(spec, budget)
        return EquiReport("iii", out.is_yes, {"isomorphism": out.witness})
    lo = w.l_o
    rest = s - lo
    if hsub.order % 2:
        ok = _sumset(rest, hel, n) == rest
        return EquiReport("i", ok, {"L": w.l, "L_o": lo})
    if hsub.order % 4 == 2:
        ok = hsub.order > 2 and _sumset(rest, hsub.doubled().elements, n) == rest
        return EquiReport("ii", ok, {"L": w.l, "L_o": lo})
    out = ncon_check(spec, budget)
    return EquiReport("iv", out.is_yes, {"ncon": out.witness})


# --- Type I / Type II ----------------------------------------------------------


def preserving_check(spec: CirculantSpec, budget: Budget | int | None = None) -> SearchOutcome:
    """Distinct ``sigma, rho`` in ``Aut(Cay(Z_n, S_o))`` preserving the evens with
    ``y^rho - x^sigma`` in ``S_e`` whenever ``y - x`` is in ``S_e``.

    Such pairs are exactly the colour-preserving automorphisms of the
    two-layer graph with ``Cay(Z_n, S_o)`` inside each layer and cross edges
    ``(x,0)-(y,1)`` for ``y - x`` in ``S_e``, coloured by layer and parity.
    """
    n = spec.n
    if n % 2:
        return SearchOutcome.no()
    budget = as_budget(budget, "preserving search")
    go = cayley_cyclic(n, spec.s_odd)
    cross = cayley_cyclic(n, spec.s_even).matrix
    adj = _two_layer(go.matrix, cross)
    try:
        x = least_nondiagonal(adj, layer_colors([v % 2 for v in range(n)]), budget)
    except SearchBudgetExceeded:
        return SearchOutcome.inconclusive(budget.used)
    if x is None:
        return SearchOutcome.no(budget.used)
    sigma, rho = split_layers(x, n)
    if not _preserving_valid(spec, go, sigma, rho):
        raise AssertionError("invalid preserving witness")
    return SearchOutcome.yes({"sigma": sigma, "rho": rho}, budget.used)


def _preserving_valid(spec: CirculantSpec, go: Graph, sigma: Permutation, rho: Permutation) -> bool:
    n, se = spec.n, spec.s_even
    if sigma == rho or not preserves_adjacency(go, sigma) or not preserves_adjacency(go, rho):
        return False
    if any(sigma(x) % 2 != x % 2 or rho(x) % 2 != x % 2 for x in range(n)):
        return False
    return all(
        (rho(y) - sigma(x)) % n in se for x in range(n) for y in range(n) if (y - x) % n in se
    )


class TypeKind:
    STABLE = "Stable"
    TRIVIAL = "TriviallyUnstable"
    TYPE_I = "TypeI"
    TYPE_II = "TypeII"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class TypeVerdict:
    kind: str
    witness: TwoFoldPair | None = None
    via_shortcut: bool = False

    def to_json(self) -> dict:
        return {
            "type": self.kind,
            "witness": None if self.witness is None else self.witness.to_json(),
            "even_subgraph_stable": self.via_shortcut,
        }


def even_subgraph(spec: CirculantSpec) -> Graph:
    half, conn = even_subgraph_spec(spec)
    return cayley_cyclic(half, conn)


def classify_type(
    spec: CirculantSpec,
    budget: Budget | int | None = None,
    status: StabilityVerdict | None = None,
) -> TypeVerdict:
    if spec.n % 2:
        raise BadParameters("Type I/II is defined for even order only")
    g = circulant(spec)
    budget = as_budget(budget, "type classification")
    try:
        st = status or stability_status(g, budget)
    except SearchBudgetExceeded:
        return TypeVerdict(TypeKind.UNKNOWN)
    if st.verdict is Verdict.STABLE:
        return TypeVerdict(TypeKind.STABLE)
    if st.verdict is Verdict.TRIVIALLY_UNSTABLE:
        return TypeVerdict(TypeKind.TRIVIAL)
    try:
        if stability_status(even_subgraph(spec), budget).stable:
            return TypeVerdict(TypeKind.TYPE_II, via_shortcut=True)
    except SearchBudgetExceeded:
        return TypeVerdict(TypeKind.UNKNOWN)
    out = find_tf_morphism(g, True, range(0, spec.n, 2), budget)
    if out.is_yes:
        return TypeVerdict(TypeKind.TYPE_I, out.witness)
    if out.is_no:
        return TypeVerdict(TypeKind.TYPE_II)
    return TypeVerdict(TypeKind.UNKNOWN)


def all_conditions(spec: CirculantSpec, budget: int | None = None) -> ConditionReport:
    """Every condition on one spec; each search gets its own budget."""
    rep = wilson_conditions(spec)
    rep.outcomes["T3_2"] = hmm_t32(spec)
    rep.outcomes["P3_7"] = hmm_p37(spec, budget)
    rep.outcomes["P3_12"] = hmm_p312(spec, budget)
    rep.outcomes["NCON"] = ncon_check(spec, budget)
    rep.outcomes["HMMTYPE"] = theorem_hmmtype(spec, budget)
    rep.outcomes["OLDTONEW"] = oldtonew_any(spec)
    rep.outcomes["PRESERVING"] = preserving_check(spec, budget)
    return rep


# --- constructions -------------------------------------------------------------


@dataclass(frozen=True)
class Construction:
    name: str
    params: dict
    graph: ProductGraph
    spec: CirculantSpec | None
    relabel: tuple[int, ...] | None
    closed_form: CirculantSpec | None = None

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "params": self.params,
            "order": self.graph.graph.order,
            "spec": None if self.spec is None else str(self.spec),
            "s": None if self.spec is None else list(self.spec.s),
        }


def _need(cond: bool, msg: str) -> None:
    if not cond:
        raise BadParameters(msg)


def _as_circulant(pg: ProductGraph, phi) -> tuple[CirculantSpec, tuple[int, ...]]:
    """Relabel ``pg`` by ``phi(a, x)`` and read off its connection set."""
    nl, nr = pg.left_order, pg.right_order
    total = nl * nr
    lab = [phi(a, x) % total for a in range(nl) for x in range(nr)]
    if sorted(lab) != list(range(total)):
        raise AssertionError("relabelling is not a bijection")
    g = pg.graph.relabel(lab)
    spec = CirculantSpec(total, tuple(sorted(g.neighbors(0))))
    if circulant(spec) != g:
        raise AssertionError("relabelled product is not circulant")
    return spec, tuple(lab)


def _spec(n: int, reps: Iterable[int]) -> CirculantSpec:
    return CirculantSpec.closed(n, reps)


def _translation(n: int, i: int) -> Permutation:
    return Permutation((x + i) % n for x in range(n))


EXAMPLES = (
    "cpc1",
    "cpc2",
    "cpc3",
    "strpex",
    "strex",
    "semiex1",
    "semiex2",
    "semiex3",
    "lexiex",
    "k2n",
    "dihedral",
)


def construct_example(name: str, **params) -> Construction:
    """Build one of the product examples with its circulant form where it exists.

    Parameters by name: ``n`` everywhere; ``two_m`` for cpc2 and lexiex;
    ``cycle`` for k2n; ``kind`` (``cartesian`` or ``strong``) for strpex;
    ``k`` for dihedral.
    """
    params = {k: v for k, v in params.items() if v is not None}
    builder = _BUILDERS.get(name)
    if builder is None:
        raise BadParameters(f"unknown example {name!r}; choose from {', '.join(EXAMPLES)}")
    try:
        n = int(params["n"])
    except (KeyError, TypeError, ValueError):
        raise BadParameters(f"{name} needs an integer parameter n") from None
    return builder(n, params)


def _cpc1(n: int, params: dict) -> Construction:
    _need(n >= 3, "cpc1 needs n >= 3")
    _need(math.gcd(30, n) == 1, "cpc1 needs gcd(30, n) = 1")
    g = circulant(_spec(30, [1, 4]))
    h = cycle_graph(n)

    def p(a, b):
        d = (b - a) % 30
        if d in (1, 26):
            return _translation(n, 1)
        if d in (29, 4):
            return _translation(n, -1)
        return _translation(n, 0)

    pg = direct_bundle(g, h, BundleMap.from_function(30, h, p))
    spec, lab = _as_circulant(pg, lambda a, x: n * a + 30 * x)
    closed = _spec(30 * n, [n, n + 60, 4 * n, 4 * n - 60])
    return Construction("cpc1", {"n": n}, pg, spec, lab, closed)


def _cpc2(n: int, params: dict) -> Construction:
    two_m = int(params.get("two_m", 4))
    _need(n >= 3, "cpc2 needs n >= 3")
    _need(two_m >= 4 and two_m % 2 == 0, "cpc2 needs an even 2m >= 4")
    _need(math.gcd(n, two_m) == 1, "cpc2 needs gcd(n, 2m) = 1")
    m = two_m // 2
    g = cycle_graph(n)
    h = complete_graph(two_m)
    delta = _translation(two_m, m)
    pg = direct_bundle(g, h, BundleMap.from_function(n, h, lambda a, b: delta))
    spec, lab = _as_circulant(pg, lambda a, x: two_m * a + n * x)
    return Construction("cpc2", {"n": n, "two_m": two_m}, pg, spec, lab)


def _cpc3(n: int, params: dict) -> Construction:
    _need(n >= 3, "cpc3 needs n >= 3 (the cycle Cay(Z_n, {1,-1}))")
    _need(math.gcd(n, 12) == 1, "cpc3 needs gcd(n, 12) = 1")
    g = cycle_graph(n)
    h = circulant(_spec(12, [1, 2, 7]))
    delta = _translation(12, 6)
    pg = direct_bundle(g, h, BundleMap.from_function(n, h, lambda a, b: delta))
    spec, lab = _as_circulant(pg, lambda a, x: 12 * a + n * x)
    closed = _spec(12 * n, [c * n + 12 for c in (1, 4, 5, 7, 8, 11)])
    return Construction("cpc3", {"n": n}, pg, spec, lab, closed)


def _strpex(n: int, params: dict) -> Construction:
    kind = ProductKind.parse(str(params.get("kind", "cartesian")))
    _need(kind in (ProductKind.CARTESIAN, ProductKind.STRONG), "strpex kind is cartesian or strong")
    _need(n >= 2, "strpex needs n >= 2")
    _need(n % 3 != 0, "strpex needs 3 not dividing n")
    g = cycle_graph(2 * n)
    h = circulant(_spec(9, [1, 4, 7]))
    pg = product(g, h, kind)
    spec, lab = _as_circulant(pg, lambda a, x: 9 * a + 2 * n * x)
    if kind is ProductKind.CARTESIAN:
        closed = _spec(18 * n, [9, 2 * n, 8 * n, 14 * n])
    else:
        reps = [9, 2 * n, 8 * n, 14 * n]
        for t in (2 * n, 8 * n, 14 * n):
            reps += [t + 9, t - 9]
        closed = _spec(18 * n, reps)
    return Construction("strpex", {"n": n, "kind": kind.value}, pg, spec, lab, closed)


def _strex(n: int, params: dict) -> Construction:
    # C_3 = K_3 gives equal closed neighbourhoods, hence twins in the complement
    _need(n >= 4, "strex needs n >= 4 (for n = 3 the complement has twins)")
    _need(math.gcd(n, 10) == 1, "strex needs gcd(n, 10) = 1")
    g = circulant(_spec(10, [3, 4, 5]))
    h = cycle_graph(n)
    strong = product(g, h, ProductKind.STRONG)
    pg = ProductGraph(complement(strong.graph), 10, n)
    spec, lab = _as_circulant(pg, lambda a, x: n * a + 10 * x)
    return Construction("strex", {"n": n}, pg, spec, lab)


def _semiex1(n: int, params: dict) -> Construction:
    # the semi-strong product is R-thin only if the left factor has distinct
    # closed neighbourhoods, which fails for C_3 = K_3
    _need(n >= 4, "semiex1 needs n >= 4 (C_3 = K_3 has equal closed neighbourhoods)")
    _need(math.gcd(n, 10) == 1, "semiex1 needs gcd(n, 10) = 1")
    pg = product(cycle_graph(n), circulant(_spec(10, [1, 2])), ProductKind.SEMISTRONG)
    spec, lab = _as_circulant(pg, lambda a, x: 10 * a + n * x)
    closed = _spec(10 * n, [n + 10, n - 10, 2 * n + 10, 2 * n - 10, n, 2 * n])
    return Construction("semiex1", {"n": n}, pg, spec, lab, closed)


def _semiex2(n: int, params: dict) -> Construction:
    _need(n >= 3, "semiex2 needs n >= 3")
    _need(math.gcd(n, 10) == 1, "semiex2 needs gcd(n, 10) = 1")
    pg = product(circulant(_spec(10, [3, 4, 5])), cycle_graph(n), ProductKind.SEMISTRONG)
    spec, lab = _as_circulant(pg, lambda a, x: n * a + 10 * x)
    closed = _spec(10 * n, [3 * n + 10, 3 * n - 10, 4 * n + 10, 4 * n - 10, 5 * n + 10, 10])
    return Construction("semiex2", {"n": n}, pg, spec, lab, closed)


def _semiex3(n: int, params: dict) -> Construction:
    _need(n >= 3 and n % 2 == 1, "semiex3 needs an odd n >= 3")
    pg = product(circulant(_spec(8, [1, 2, 3])), cycle_graph(n), ProductKind.SEMISTRONG)
    spec, lab = _as_circulant(pg, lambda a, x: n * a + 8 * x)
    reps = [n + 8, n - 8, 2 * n + 8, 2 * n - 8, 3 * n + 8, 3 * n - 8, 8]
    return Construction("semiex3", {"n": n}, pg, spec, lab, _spec(8 * n, reps))


def _lexiex(n: int, params: dict) -> Construction:
    two_m = params.get("two_m")
    if two_m is None:
        two_m = next(t for t in itertools.count(6, 2) if math.gcd(n, t) == 1)
    two_m = int(two_m)
    _need(n >= 3, "lexiex needs n >= 3")
    # C_4 is R-thick and so is any lexicographic product over it
    _need(two_m >= 6 and two_m % 2 == 0, "lexiex needs an even 2m >= 6 (C_4 is R-thick)")
    _need(math.gcd(n, two_m) == 1, "lexiex needs gcd(n, 2m) = 1")
    pg = product(cycle_graph(n), cycle_graph(two_m), ProductKind.LEXICOGRAPHIC)
    spec, lab = _as_circulant(pg, lambda a, x: two_m * a + n * x)
    reps = [two_m + n * x for x in range(two_m)] + [n]
    return Construction("lexiex", {"n": n, "two_m": two_m}, pg, spec, lab, _spec(n * two_m, reps))


def _k2n(n: int, params: dict) -> Construction:
    c = int(params.get("cycle", 3))
    _need(n >= 2, "k2n needs n >= 2")
    _need(c >= 3 and c % 2 == 1, "k2n needs an odd cycle length >= 3")
    left = cayley_cyclic(2 * n, [x for x in range(1, 2 * n) if x != n])
    pg = product(left, cycle_graph(c), ProductKind.SEMISTRONG)
    spec = lab = None
    if math.gcd(2 * n, c) == 1:
        spec, lab = _as_circulant(pg, lambda a, x: c * a + 2 * n * x)
    return Construction("k2n", {"n": n, "cycle": c}, pg, spec, lab)


def _dihedral(n: int, params: dict) -> Construction:
    k = int(params.get("k", 3))
    _need(n >= 3, "dihedral needs n >= 3")
    _need(k >= 3, "dihedral needs k >= 3")
    h = cycle_graph(k)
    delta = Permutation((-x) % k for x in range(k))
    pg = direct_bundle(cycle_graph(n), h, BundleMap.from_function(n, h, lambda a, b: delta))
    return Construction("dihedral", {"n": n, "k": k}, pg, None, None)


_BUILDERS = {
    "cpc1": _cpc1,
    "cpc2": _cpc2,
    "cpc3": _cpc3,
    "strpex": _strpex,
    "strex": _strex,
    "semiex1": _semiex1,
    "semiex2": _semiex2,
    "semiex3": _semiex3,
    "lexiex": _lexiex,
    "k2n": _k2n,
    "dihedral": _dihedral,
}

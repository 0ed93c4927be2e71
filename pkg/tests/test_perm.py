import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import atlas, brute_aut_order, brute_aut_order_fast, brute_group_closure

from stabgraph.errors import DegreeMismatch, SearchBudgetExceeded
from stabgraph.graph import CirculantSpec, build_graph, circulant, complete_graph, cycle_graph
from stabgraph.perm import Permutation, PermGroup, StabChain, automorphism_group, group_order, preserves_adjacency
from stabgraph.search import automorphisms


def test_permutation_basics():
    p = Permutation([1, 2, 0])
    q = Permutation([1, 0, 2])
    # p then q
    assert (p * q)(0) == q(p(0))
    assert (p * p.inverse()).is_identity()
    assert p.inverse().images == (2, 0, 1)
    assert Permutation.from_cycles(3, [(0, 1, 2)]) == p
    assert p.is_derangement() and not q.is_derangement()
    assert q.fixed_points() == [2]
    assert p.to_json() == [1, 2, 0]
    with pytest.raises(ValueError):
        Permutation([0, 0, 1])
    with pytest.raises(DegreeMismatch):
        p * Permutation.identity(4)
    with pytest.raises(AttributeError):
        p.images = (0, 1, 2)


def test_automorphism_group_examples():
    assert automorphism_group(cycle_graph(5)).order == 10 == brute_aut_order(5, cycle_graph(5).edges())
    assert automorphism_group(complete_graph(4)).order == 24
    g = circulant(CirculantSpec.closed(10, [1, 2]))
    grp = automorphism_group(g)
    assert grp.order % 20 == 0
    shift = Permutation((x + 1) % 10 for x in range(10))
    neg = Permutation((-x) % 10 for x in range(10))
    assert preserves_adjacency(g, shift) and preserves_adjacency(g, neg)
    chain = grp.chain()
    assert chain.contains(shift) and chain.contains(neg)


def test_automorphism_orders_match_atlas_oracle():
    for n, edges in atlas(7):
        g = build_graph(n, edges)
        grp = automorphism_group(g)
        assert grp.order == brute_aut_order_fast(n, edges), (n, edges)
        for p in grp.generators:
            assert preserves_adjacency(g, p)


def test_coloured_automorphisms():
    g = cycle_graph(6)
    colours = [0, 1, 0, 1, 0, 1]
    grp = automorphism_group(g, colours)
    # rotations by even steps and reflections through vertices
    assert grp.order == 6
    for p in grp.generators:
        assert all(colours[p(v)] == colours[v] for v in range(6))


def test_group_order_examples():
    assert group_order(5, [Permutation([1, 2, 3, 4, 0])]) == 5
    assert group_order(4, []) == 1
    assert group_order(3, [Permutation([1, 0, 2]), Permutation([1, 2, 0])]) == 6
    with pytest.raises(DegreeMismatch):
        group_order(4, [Permutation([1, 0, 2])])


@st.composite
def generator_sets(draw, max_degree=7):
    n = draw(st.integers(1, max_degree))
    k = draw(st.integers(0, 3))
    gens = [draw(st.permutations(list(range(n)))) for _ in range(k)]
    return n, [Permutation(g) for g in gens]


@given(generator_sets(), st.randoms(use_true_random=False))
@settings(max_examples=120, deadline=None)
def test_group_order_matches_closure(data, rnd):
    n, gens = data
    expected = len(brute_group_closure(n, [g.images for g in gens]))
    assert group_order(n, gens) == expected
    shuffled = gens + gens[:1]
    rnd.shuffle(shuffled)
    assert group_order(n, shuffled) == expected


@given(generator_sets(max_degree=6), st.data())
@settings(max_examples=80, deadline=None)
def test_stab_chain_membership_and_elements(data, draw):
    n, gens = data
    prefix = draw.draw(st.lists(st.integers(0, n - 1), max_size=n, unique=True))
    closure = brute_group_closure(n, [g.images for g in gens])
    chain = StabChain(n, gens, base_prefix=prefix, known_order=len(closure))
    assert chain.base[: len(prefix)] == prefix
    elems = {tuple(int(x) for x in e) for e in chain.elements()}
    assert elems == closure
    for p in [Permutation(random.Random(i).sample(range(n), n)) for i in range(5)]:
        assert chain.contains(p) == (p.images in closure)


def test_stab_chain_known_order_mismatch():
    with pytest.raises(AssertionError):
        StabChain(3, [Permutation([1, 2, 0])], known_order=6)


def test_permgroup_orbit_and_json():
    grp = automorphism_group(cycle_graph(4))
    assert grp.orbit(0) == {0, 1, 2, 3}
    js = grp.to_json()
    assert js["order"] == 8 and js["degree"] == 4
    with pytest.raises(DegreeMismatch):
        PermGroup(3, (Permutation([1, 0]),), 2)


def test_budget_exhaustion_raises():
    g = complete_graph(8)
    with pytest.raises(SearchBudgetExceeded) as exc:
        automorphisms(g.matrix, budget=3)
    assert exc.value.budget == 3


def test_budget_env_override(monkeypatch):
    monkeypatch.setenv("STAB_BUDGET", "2")
    with pytest.raises(SearchBudgetExceeded):
        automorphisms(complete_graph(6).matrix)
    monkeypatch.setenv("STAB_BUDGET", "1000")
    assert automorphisms(complete_graph(6).matrix).order == 720


def test_large_symmetric_group_order():
    # 10! needs exact integer arithmetic and a deep chain
    assert automorphisms(complete_graph(10).matrix).order == 3628800
    assert automorphisms(np.zeros((12, 12), dtype=np.uint8)).order == 479001600

"""Property-based checks of the core invariants."""
import itertools

import numpy as np
from hypothesis import given, settings, strategies as st
from hypothesis.extra import numpy as hnp

from mbestmap.model import MrfModel, dumps_model, energy, model_from_dict, model_to_dict
from mbestmap.oracle import brute_force_mbest, enumerate_spanning_trees
from mbestmap.solver import (perturbed_tree_potentials, project_positive, project_zero_sum,
                             project_zero_sum_masked)
from mbestmap.stcover import (SpanningTree, build_tree_cover, max_weight_spanning_tree,
                              split_energies, tree_inequality_value)
from mbestmap.treebp import tree_map

finite = st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False)


@st.composite
def connected_graphs(draw, max_nodes=6):
    n = draw(st.integers(1, max_nodes))
    # random tree by parent pointers, then optional extra edges
    edges = {(draw(st.integers(0, v - 1)), v) for v in range(1, n)}
    pairs = [p for p in itertools.combinations(range(n), 2) if p not in edges]
    if pairs:
        edges |= set(draw(st.lists(st.sampled_from(pairs), unique=True, max_size=len(pairs))))
    return n, sorted(edges)


@st.composite
def models(draw, max_nodes=6, max_labels=3, tree=False):
    if tree:
        n = draw(st.integers(1, max_nodes))
        edges = sorted((draw(st.integers(0, v - 1)), v) for v in range(1, n))
    else:
        n, edges = draw(connected_graphs(max_nodes))
    cards = draw(st.lists(st.integers(1, max_labels), min_size=n, max_size=n))
    unary = [np.array(draw(st.lists(finite, min_size=c, max_size=c))) for c in cards]
    pairwise = [draw(hnp.arrays(np.float64, (cards[i], cards[j]), elements=finite))
                for i, j in edges]
    return MrfModel(n, tuple(cards), tuple(edges), tuple(unary), tuple(pairwise))


def labelings(model):
    return st.tuples(*[st.integers(0, c - 1) for c in model.cardinalities])


@settings(max_examples=60, deadline=None)
@given(data=st.data())
def test_energy_invariant_under_edge_permutation(data):
    model = data.draw(models())
    perm = data.draw(st.permutations(range(len(model.edges))))
    shuffled = MrfModel(model.num_nodes, model.cardinalities,
                        tuple(model.edges[k] for k in perm), model.unary,
                        tuple(model.pairwise[k] for k in perm))
    x = data.draw(labelings(model))
    assert np.isclose(energy(shuffled, x), energy(model, x), rtol=0, atol=1e-9)


@settings(max_examples=60, deadline=None)
@given(model=models())
def test_serialization_round_trip(model):
    loaded = model_from_dict(model_to_dict(model))
    assert loaded == model
    assert dumps_model(loaded) == dumps_model(model)


@settings(max_examples=60, deadline=None)
@given(model=models(max_nodes=6, tree=True))
def test_tree_map_is_optimal_and_self_consistent(model):
    x, value = tree_map(model)
    assert energy(model, x) == value
    for y in itertools.product(*[range(c) for c in model.cardinalities]):
        assert value <= energy(model, y)


@settings(max_examples=80, deadline=None)
@given(data=st.data())
def test_inequality_separates_exactly_the_excluded_labeling(data):
    n, edges = data.draw(connected_graphs(5))
    labels = data.draw(st.integers(1, 3))
    trees = enumerate_spanning_trees(n, edges)
    tree = SpanningTree(n, data.draw(st.sampled_from(trees)))
    x_m = data.draw(st.tuples(*[st.integers(0, labels - 1)] * n))
    x = data.draw(st.tuples(*[st.integers(0, labels - 1)] * n))
    value = tree_inequality_value(x, x_m, tree)
    if x == x_m:
        assert value == 1.0
    else:
        assert value <= 0.0


@settings(max_examples=60, deadline=None)
@given(data=st.data())
def test_max_weight_tree_beats_every_tree(data):
    n, edges = data.draw(connected_graphs(6))
    weights = data.draw(st.lists(finite, min_size=len(edges), max_size=len(edges)))
    w = dict(zip(edges, weights))
    best = max_weight_spanning_tree(n, edges, weights)
    best_weight = sum(w[e] for e in best.edges)
    for t in enumerate_spanning_trees(n, edges):
        assert best_weight >= sum(w[e] for e in t)


@settings(max_examples=60, deadline=None)
@given(model=models(max_nodes=7))
def test_split_energies_resum(model):
    split = split_energies(model, build_tree_cover(model))
    for i, theta in enumerate(model.unary):
        assert np.max(np.abs(sum(u[i] for u in split.unary) - theta)) <= 1e-12
    for k, theta in enumerate(model.pairwise):
        assert np.max(np.abs(sum(t[k] for t in split.pairwise if k in t) - theta)) <= 1e-12


@settings(max_examples=60, deadline=None)
@given(data=st.data())
def test_perturbed_identity(data):
    model = data.draw(models(max_nodes=6, tree=True))
    tree = SpanningTree.from_edges(model.num_nodes, model.edges)
    k = data.draw(st.integers(1, 3))
    previous = [data.draw(labelings(model)) for _ in range(k)]
    lam = data.draw(st.lists(st.floats(0, 100), min_size=k, max_size=k))
    x = data.draw(labelings(model))
    perturbed = perturbed_tree_potentials(model, previous, lam)
    expected = energy(model, x) + sum(l * tree_inequality_value(x, p, tree)
                                      for l, p in zip(lam, previous))
    assert np.isclose(energy(perturbed, x), expected, rtol=1e-12, atol=1e-9)


@given(hnp.arrays(np.float64, hnp.array_shapes(max_dims=3, max_side=5), elements=finite))
def test_positive_projection_idempotent(values):
    once = project_positive(values)
    assert np.all(once >= 0)
    assert np.array_equal(project_positive(once), once)
    assert np.array_equal(once[values >= 0], values[values >= 0])


@given(hnp.arrays(np.float64, st.tuples(st.integers(1, 5), st.integers(1, 4), st.integers(1, 3)),
                  elements=finite))
def test_zero_sum_projection(delta):
    once = project_zero_sum(delta)
    assert np.max(np.abs(once.sum(axis=0))) <= 1e-9
    assert np.allclose(project_zero_sum(once), once, atol=1e-12)
    # differences between subproblems survive
    assert np.allclose(once - once[:1], delta - delta[:1], atol=1e-9)


@given(data=st.data())
def test_masked_zero_sum_projection(data):
    p = data.draw(st.integers(1, 4))
    e = data.draw(st.integers(1, 3))
    mask = data.draw(hnp.arrays(bool, (p, e)))
    delta = data.draw(hnp.arrays(np.float64, (p, e, 2, 2), elements=finite))
    once = project_zero_sum_masked(delta, mask)
    assert np.max(np.abs(once.sum(axis=0))) <= 1e-9
    assert np.all(once[~mask] == 0.0)
    assert np.allclose(project_zero_sum_masked(once, mask), once, atol=1e-12)


@settings(max_examples=40, deadline=None)
@given(model=models(max_nodes=5), m=st.integers(1, 20))
def test_brute_force_ranking_sorted_and_distinct(model, m):
    ranked = brute_force_mbest(model, m)
    energies = [e for _, e in ranked]
    assert energies == sorted(energies)
    assert len({x for x, _ in ranked}) == len(ranked) == min(m, model.num_labelings())

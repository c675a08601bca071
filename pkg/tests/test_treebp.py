import itertools

import numpy as np
import pytest

from mbestmap.exceptions import InvalidInputError
from mbestmap.model import MrfModel, energy
from mbestmap.oracle import brute_force_mbest
from mbestmap.treebp import NO_PARENT, tree_map, tree_map_with_value_only, tree_order

from helpers import random_tree_model


def test_chain2_map(chain2_model):
    assert tree_map(chain2_model) == ((0, 0), 0.0)
    assert tree_map_with_value_only(chain2_model) == 0.0


def test_single_node_map():
    m = MrfModel(1, (3,), (), (np.array([3.0, 1.0, 2.0]),), ())
    assert tree_map(m) == ((1,), 1.0)
    assert tree_map_with_value_only(m) == 1.0


def test_ties_pick_smallest_label():
    m = MrfModel(3, (3, 3, 3), ((0, 1), (1, 2)), (np.zeros(3),) * 3, (np.zeros((3, 3)),) * 2)
    assert tree_map(m) == ((0, 0, 0), 0.0)


def test_cycle_rejected():
    edges = ((0, 1), (1, 2), (0, 2))
    m = MrfModel(3, (2, 2, 2), edges, (np.zeros(2),) * 3, (np.zeros((2, 2)),) * 3)
    with pytest.raises(InvalidInputError, match="cycle"):
        tree_map(m)


def test_forest_components_solved_independently():
    m = MrfModel(4, (2, 2, 2, 2), ((0, 1), (2, 3)),
                 (np.array([0.0, 1.0]), np.array([1.0, 0.0]), np.array([2.0, 0.0]),
                  np.array([0.0, 0.0])),
                 (np.array([[0.0, -3.0], [0.0, 0.0]]), np.array([[0.0, 0.0], [0.0, -1.0]])))
    x, value = tree_map(m)
    best = min(itertools.product(range(2), repeat=4), key=lambda y: energy(m, y))
    assert value == energy(m, best)
    assert value == energy(m, x)


def test_tree_order_structure():
    edges = [(0, 1), (1, 2), (1, 3), (3, 4)]
    order = tree_order(5, edges)
    assert order.root == 0 and order.parent[0] == NO_PARENT
    assert sorted(order.visit_order) == list(range(5))
    position = {v: k for k, v in enumerate(order.visit_order)}
    for child in range(1, 5):
        assert position[child] < position[order.parent[child]]
        i, j = edges[order.parent_edge[child]]
        assert child in (i, j) and order.parent[child] in (i, j)
        assert order.child_is_row[child] == (i == child)


def test_random_trees_match_enumeration():
    rng = np.random.default_rng(2024)
    for _ in range(300):
        n = int(rng.integers(1, 9))
        model = random_tree_model(rng, n)
        x, value = tree_map(model)
        (best_x, best_value), = brute_force_mbest(model, 1)
        assert value == best_value
        assert energy(model, x) == value


def test_value_is_a_lower_bound_on_every_labeling():
    rng = np.random.default_rng(7)
    for _ in range(30):
        model = random_tree_model(rng, 5, fixed_labels=3)
        _, value = tree_map(model)
        for y in itertools.product(range(3), repeat=5):
            assert value <= energy(model, y)


def test_deterministic():
    rng = np.random.default_rng(1)
    model = random_tree_model(rng, 9)
    assert tree_map(model) == tree_map(model)

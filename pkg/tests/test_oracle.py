import itertools

import numpy as np
import pytest

from mbestmap.exceptions import InvalidInputError
from mbestmap.model import MrfModel, energy
from mbestmap.oracle import (brute_force_excluding, brute_force_lagrangian, brute_force_mbest,
                             enumerate_spanning_trees, labeling_energies)

from helpers import random_model, random_tree_model


def test_chain2_top_two(chain2_model):
    assert brute_force_mbest(chain2_model, 2) == [((0, 0), 0.0), ((1, 1), 2.0)]


def test_m_larger_than_labelings_returns_all_sorted(chain2_model):
    ranked = brute_force_mbest(chain2_model, 10)
    assert [e for _, e in ranked] == [0.0, 2.0, 6.0, 6.0]
    assert [x for x, _ in ranked][2:] == [(0, 1), (1, 0)]


def test_cap_enforced():
    model = MrfModel(3, (4, 4, 4), (), (np.zeros(4),) * 3, ())
    with pytest.raises(InvalidInputError, match="64"):
        brute_force_mbest(model, 1, cap=10)


def test_bad_m(chain2_model):
    with pytest.raises(InvalidInputError):
        brute_force_mbest(chain2_model, 0)


def test_vectorized_energies_match_scalar_energy():
    rng = np.random.default_rng(3)
    model = random_tree_model(rng, 6)
    labels = np.array(list(itertools.product(*[range(c) for c in model.cardinalities])))
    values = labeling_energies(model, labels)
    for row, v in zip(labels[:200], values[:200]):
        assert v == energy(model, tuple(row))


def test_ranking_is_sorted_and_distinct():
    rng = np.random.default_rng(4)
    model = random_tree_model(rng, 7)
    ranked = brute_force_mbest(model, 30)
    energies = [e for _, e in ranked]
    assert energies == sorted(energies)
    assert len({x for x, _ in ranked}) == 30


def test_chunked_enumeration_matches_single_pass(monkeypatch):
    import mbestmap.oracle as oracle
    rng = np.random.default_rng(9)
    model = random_tree_model(rng, 8, fixed_labels=3)
    full = brute_force_mbest(model, 12)
    monkeypatch.setattr(oracle, "CHUNK", 97)
    assert brute_force_mbest(model, 12) == full


def test_excluding(chain2_model):
    assert brute_force_excluding(chain2_model, [(0, 0)]) == ((1, 1), 2.0)
    assert brute_force_excluding(chain2_model, [(1, 1)]) == ((0, 0), 0.0)


def test_spanning_tree_counts():
    triangle = [(0, 1), (1, 2), (0, 2)]
    assert len(enumerate_spanning_trees(3, triangle)) == 3
    k4 = list(itertools.combinations(range(4), 2))
    trees = enumerate_spanning_trees(4, k4)
    assert len(trees) == 16 and len(set(trees)) == 16
    k5 = list(itertools.combinations(range(5), 2))
    assert len(enumerate_spanning_trees(5, k5)) == 125
    assert enumerate_spanning_trees(4, [(0, 1), (1, 2), (2, 3)]) == [((0, 1), (1, 2), (2, 3))]


def test_spanning_tree_size_cap():
    with pytest.raises(InvalidInputError):
        enumerate_spanning_trees(9, [(i, i + 1) for i in range(8)])


def test_lagrangian_zero_multipliers_is_map():
    rng = np.random.default_rng(2)
    model = random_tree_model(rng, 6)
    (_, e1), = brute_force_mbest(model, 1)
    assert brute_force_lagrangian(model, [(0,) * 6], [0.0]) == e1


def test_large_multiplier_forces_nonpositive_inequality():
    rng = np.random.default_rng(5)
    model = random_tree_model(rng, 5, fixed_labels=3)
    (x1, _), = brute_force_mbest(model, 1)
    value = brute_force_lagrangian(model, [x1], [1e6])
    # the penalized optimum must sit at a labeling with I(x, x1) <= 0
    assert value < 1e5


def test_lagrangian_requires_tree():
    rng = np.random.default_rng(0)
    model = random_model(rng, 3, [(0, 1), (1, 2), (0, 2)], fixed_labels=2)
    with pytest.raises(InvalidInputError):
        brute_force_lagrangian(model, [(0, 0, 0)], [1.0])

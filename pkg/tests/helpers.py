"""Model builders shared by the test modules."""
import numpy as np

from mbestmap.bench import random_spanning_tree
from mbestmap.model import MrfModel


def chain2() -> MrfModel:
    """Two nodes, unary [0, 1] each, coupling 5 on disagreement."""
    return MrfModel(2, (2, 2), ((0, 1),), (np.array([0.0, 1.0]), np.array([0.0, 1.0])),
                    (np.array([[0.0, 5.0], [5.0, 0.0]]),))


def random_model(rng, n, edges, max_labels=4, fixed_labels=None) -> MrfModel:
    if fixed_labels is None:
        cards = tuple(int(c) for c in rng.integers(1, max_labels + 1, size=n))
    else:
        cards = (fixed_labels,) * n
    unary = tuple(rng.standard_normal(c) for c in cards)
    pairwise = tuple(rng.standard_normal((cards[i], cards[j])) for i, j in edges)
    return MrfModel(n, cards, tuple(edges), unary, pairwise)


def random_tree_model(rng, n, max_labels=4, fixed_labels=None) -> MrfModel:
    return random_model(rng, n, random_spanning_tree(n, rng), max_labels, fixed_labels)


def random_connected_edges(rng, n, extra_prob=0.4):
    """Random spanning tree plus each remaining pair with probability ``extra_prob``."""
    edges = set(random_spanning_tree(n, rng))
    for i in range(n):
        for j in range(i + 1, n):
            if (i, j) not in edges and rng.random() < extra_prob:
                edges.add((i, j))
    return sorted(edges)

"""Brute-force ground truth for tests and acceptance runs.

Nothing here calls into the solver, belief propagation or cover code; the
only shared piece is the ``MrfModel`` container.
"""
from __future__ import annotations

import math
from typing import List, Sequence, Tuple

import numpy as np

from .exceptions import InvalidInputError
from .model import MrfModel

DEFAULT_CAP = 2 ** 24
CHUNK = 1 << 18

MBestList = List[Tuple[Tuple[int, ...], float]]


def _require_cap(model: MrfModel, cap: int) -> int:
    count = math.prod(model.cardinalities)
    if count > cap:
        raise InvalidInputError(
            f"enumeration needs {count} labelings, above the cap of {cap}")
    return count


def _chunks(model: MrfModel, count: int):
    """Labelings in lexicographic order as (start offset, per-node label columns)."""
    for start in range(0, count, CHUNK):
        flat = np.arange(start, min(start + CHUNK, count))
        yield start, np.unravel_index(flat, model.cardinalities)


def _column_energies(model: MrfModel, columns) -> np.ndarray:
    total = np.zeros(len(columns[0]) if columns else 1)
    for table, col in zip(model.unary, columns):
        total += np.take(table, col)
    for (i, j), table in zip(model.edges, model.pairwise):
        total += np.take(table.ravel(), columns[i] * table.shape[1] + columns[j])
    return total


def labeling_energies(model: MrfModel, labels: np.ndarray) -> np.ndarray:
    """Energy of each row of ``labels`` by direct table lookups."""
    labels = np.asarray(labels)
    return _column_energies(model, tuple(np.ascontiguousarray(labels[:, i])
                                         for i in range(model.num_nodes)))


def _top(model: MrfModel, M: int, cap: int, score) -> MBestList:
    count = _require_cap(model, cap)
    keep_scores = np.zeros(0)
    keep_index = np.zeros(0, dtype=np.int64)
    for start, columns in _chunks(model, count):
        scores = np.concatenate([keep_scores, score(columns)])
        index = np.concatenate([keep_index, np.arange(start, start + len(columns[0]))])
        if len(scores) > M:
            # keep everything tied with the M-th smallest score, then order exactly
            kth = np.partition(scores, M - 1)[M - 1]
            chosen = scores <= kth
            scores, index = scores[chosen], index[chosen]
        # energy first, then lexicographic (== enumeration index) order
        order = np.lexsort((index, scores))[:M]
        keep_scores, keep_index = scores[order], index[order]
    labels = np.stack(np.unravel_index(keep_index, model.cardinalities), axis=1)
    return [(tuple(int(v) for v in row), float(s)) for row, s in zip(labels, keep_scores)]


def brute_force_mbest(model: MrfModel, M: int, cap: int = DEFAULT_CAP) -> MBestList:
    """The M lowest-energy labelings; ties ordered lexicographically."""
    if M < 1:
        raise InvalidInputError("M must be at least 1")
    return _top(model, M, cap, lambda columns: _column_energies(model, columns))


def brute_force_excluding(model: MrfModel, excluded: Sequence[Sequence[int]],
                          cap: int = DEFAULT_CAP) -> Tuple[Tuple[int, ...], float]:
    """Lowest-energy labeling not in ``excluded``."""
    excluded = {tuple(int(v) for v in x) for x in excluded}
    ranked = brute_force_mbest(model, len(excluded) + 1, cap)
    for x, e in ranked:
        if x not in excluded:
            return x, e
    raise InvalidInputError("every labeling is excluded")


def _tree_degrees(model: MrfModel) -> np.ndarray:
    deg = np.zeros(model.num_nodes, dtype=np.int64)
    for i, j in model.edges:
        deg[i] += 1
        deg[j] += 1
    return deg


def brute_force_lagrangian(model: MrfModel, previous: Sequence[Sequence[int]],
                           lam: Sequence[float], cap: int = DEFAULT_CAP) -> float:
    """min over labelings of energy + sum_m lam_m * I(x, x_m) on a tree model."""
    if len(model.edges) != model.num_nodes - 1:
        raise InvalidInputError("the tree Lagrangian needs a tree model")
    deg = _tree_degrees(model)
    prev = [np.asarray(x, dtype=np.int64) for x in previous]

    def score(columns):
        total = _column_energies(model, columns)
        for x_m, weight in zip(prev, lam):
            agree = [col == s for col, s in zip(columns, x_m)]
            value = np.zeros(len(total))
            for i, a in enumerate(agree):
                value += (1 - int(deg[i])) * a
            for i, j in model.edges:
                value += agree[i] & agree[j]
            total = total + float(weight) * value
        return total

    return _top(model, 1, cap, score)[0][1]


def enumerate_spanning_trees(num_nodes: int, edges: Sequence[Tuple[int, int]],
                             max_nodes: int = 8) -> List[Tuple[Tuple[int, int], ...]]:
    """Every spanning tree as a sorted tuple of canonical edges.

    Include/exclude recursion over the edges in canonical order; a branch is
    dropped once the edges still available can no longer connect the graph.
    """
    if num_nodes > max_nodes:
        raise InvalidInputError(f"spanning-tree enumeration limited to {max_nodes} nodes")
    edges = sorted((min(i, j), max(i, j)) for i, j in edges)
    need = num_nodes - 1
    found = []

    def component_root(parent, a):
        while parent[a] != a:
            a = parent[a]
        return a

    def connected(edge_list):
        parent = list(range(num_nodes))
        for i, j in edge_list:
            ri, rj = component_root(parent, i), component_root(parent, j)
            if ri != rj:
                parent[ri] = rj
        return len({component_root(parent, v) for v in range(num_nodes)}) == 1

    def recurse(k, chosen):
        if len(chosen) == need:
            if connected(chosen):
                found.append(tuple(chosen))
            return
        if k == len(edges) or len(chosen) + len(edges) - k < need:
            return
        if not connected(chosen + edges[k:]):
            return
        i, j = edges[k]
        parent = list(range(num_nodes))
        for a, b in chosen:
            parent[component_root(parent, a)] = component_root(parent, b)
        if component_root(parent, i) != component_root(parent, j):
            recurse(k + 1, chosen + [(i, j)])
        recurse(k + 1, chosen)

    recurse(0, [])
    return found

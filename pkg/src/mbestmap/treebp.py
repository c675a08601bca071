"""Exact MAP on tree-structured (or forest) MRFs by two-pass min-sum.

Messages flow leaves-to-root with back-pointers recorded, then the root
labels are decoded top-down. Ties go to the smallest label index.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from .exceptions import InvalidInputError
from .model import Edge, Labeling, MrfModel

NO_PARENT = -1


@dataclass(frozen=True)
class TreeOrder:
    """Rooted traversal of a forest.

    ``parent_edge[c]`` is the index (into the edge list the order was built
    from) of the edge joining ``c`` to its parent, and ``child_is_row[c]``
    says whether ``c`` is the row endpoint of that edge's table.
    """

    root: int
    roots: Tuple[int, ...]
    parent: Tuple[int, ...]
    parent_edge: Tuple[int, ...]
    child_is_row: Tuple[bool, ...]
    visit_order: Tuple[int, ...]


def tree_order(num_nodes: int, edges: Sequence[Edge], root: int = 0) -> TreeOrder:
    """Root every component (first at ``root``, then lowest unvisited id)."""
    adj = [[] for _ in range(num_nodes)]
    for k, (i, j) in enumerate(edges):
        adj[i].append((j, k))
        adj[j].append((i, k))
    parent = [NO_PARENT] * num_nodes
    parent_edge = [NO_PARENT] * num_nodes
    child_is_row = [False] * num_nodes
    visited = [False] * num_nodes
    top_down = []
    roots = []
    starts = [root] + [v for v in range(num_nodes) if v != root]
    for start in starts:
        if visited[start]:
            continue
        roots.append(start)
        visited[start] = True
        queue = [start]
        head = 0
        while head < len(queue):
            u = queue[head]
            head += 1
            top_down.append(u)
            for v, k in adj[u]:
                if k == parent_edge[u]:
                    continue
                if visited[v]:
                    raise InvalidInputError(f"edge set contains a cycle through edge {edges[k]}")
                visited[v] = True
                parent[v] = u
                parent_edge[v] = k
                child_is_row[v] = edges[k][0] == v
                queue.append(v)
    return TreeOrder(root=roots[0], roots=tuple(roots), parent=tuple(parent),
                     parent_edge=tuple(parent_edge), child_is_row=tuple(child_is_row),
                     visit_order=tuple(reversed(top_down)))


def min_sum(order: TreeOrder, unary: Sequence[np.ndarray],
            pairwise: Sequence[np.ndarray]) -> Labeling:
    """Decode a minimizing labeling given a precomputed traversal.

    ``pairwise`` is aligned with the edge list ``order`` was built from.
    """
    n = len(unary)
    belief = [np.array(u, dtype=np.float64) for u in unary]
    backptr = [None] * n
    for c in order.visit_order:
        p = order.parent[c]
        if p == NO_PARENT:
            continue
        table = pairwise[order.parent_edge[c]]
        if not order.child_is_row[c]:
            table = table.T
        cost = belief[c][:, None] + table
        arg = cost.argmin(axis=0)
        msg = cost.min(axis=0)
        msg -= msg.min()
        backptr[c] = arg
        belief[p] += msg
    labels = [0] * n
    for c in reversed(order.visit_order):
        p = order.parent[c]
        if p == NO_PARENT:
            labels[c] = int(belief[c].argmin())
        else:
            labels[c] = int(backptr[c][labels[p]])
    return tuple(labels)


def table_energy(edges: Sequence[Edge], unary: Sequence[np.ndarray],
                 pairwise: Sequence[np.ndarray], x: Labeling) -> float:
    total = 0.0
    for i, table in enumerate(unary):
        total += float(table[x[i]])
    for (i, j), table in zip(edges, pairwise):
        total += float(table[x[i], x[j]])
    return total


def tree_map(model: MrfModel) -> Tuple[Labeling, float]:
    """Minimum-energy labeling of an acyclic model and its energy.

    Raises InvalidInputError when the edge set has a cycle.
    """
    order = tree_order(model.num_nodes, model.edges)
    x = min_sum(order, model.unary, model.pairwise)
    return x, table_energy(model.edges, model.unary, model.pairwise, x)


def tree_map_with_value_only(model: MrfModel) -> float:
    return tree_map(model)[1]

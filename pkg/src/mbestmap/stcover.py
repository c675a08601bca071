"""Spanning-tree inequalities, their separation oracle, and tree covers.

For an excluded labeling ``x_m`` and a spanning tree ``T`` the inequality
value is

    I_T(mu, x_m) = sum_i (1 - deg_T(i)) mu_i(x_m[i]) + sum_{(i,j) in T} mu_ij(x_m[i], x_m[j])

which equals 1 at ``mu = x_m`` and is <= 0 at every other integer labeling.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Sequence, Tuple, Union

import numpy as np

from .exceptions import InvalidInputError
from .model import Edge, FractionalPrimal, Labeling, MrfModel


class UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, a: int) -> int:
        root = a
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[a] != root:
            self.parent[a], a = root, self.parent[a]
        return root

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[max(ra, rb)] = min(ra, rb)
        return True


def _canonical(edge) -> Edge:
    i, j = (int(v) for v in edge)
    return (i, j) if i < j else (j, i)


@dataclass(frozen=True)
class SpanningTree:
    """A spanning tree identified by its sorted canonical edge list."""

    num_nodes: int
    edges: Tuple[Edge, ...]

    @classmethod
    def from_edges(cls, num_nodes: int, edges) -> "SpanningTree":
        edges = tuple(sorted(_canonical(e) for e in edges))
        if len(set(edges)) != len(edges):
            raise InvalidInputError("spanning tree has duplicate edges")
        if len(edges) != num_nodes - 1:
            raise InvalidInputError(
                f"a spanning tree on {num_nodes} nodes needs {num_nodes - 1} edges, "
                f"got {len(edges)}")
        uf = UnionFind(num_nodes)
        for i, j in edges:
            if not (0 <= i < num_nodes and 0 <= j < num_nodes) or i == j:
                raise InvalidInputError(f"invalid tree edge ({i}, {j})")
            if not uf.union(i, j):
                raise InvalidInputError("edge set contains a cycle")
        return cls(num_nodes, edges)

    @cached_property
    def degrees(self) -> Tuple[int, ...]:
        deg = [0] * self.num_nodes
        for i, j in self.edges:
            deg[i] += 1
            deg[j] += 1
        return tuple(deg)


@dataclass(frozen=True)
class TreeCover:
    """Trees jointly containing every model edge.

    ``edge_multiplicity`` is aligned with ``edges`` (the model's edge list).
    """

    trees: Tuple[SpanningTree, ...]
    edges: Tuple[Edge, ...]
    edge_multiplicity: Tuple[int, ...]


@dataclass(frozen=True)
class SplitEnergies:
    """Per-tree energies; ``pairwise[k]`` maps model edge index -> table for tree k."""

    cover: TreeCover
    unary: Tuple[Tuple[np.ndarray, ...], ...]
    pairwise: Tuple[Dict[int, np.ndarray], ...]


def tree_inequality_value(mu: Union[FractionalPrimal, Sequence[int]], x_m: Labeling,
                          tree: SpanningTree) -> float:
    """Evaluate the spanning-tree inequality left-hand side at ``mu``."""
    deg = tree.degrees
    if len(x_m) != tree.num_nodes:
        raise InvalidInputError("excluded labeling does not match the tree's node count")
    if isinstance(mu, FractionalPrimal):
        index = mu.edge_index
        total = 0.0
        for i in range(tree.num_nodes):
            total += (1 - deg[i]) * float(mu.node_marginals[i][x_m[i]])
        for e in tree.edges:
            k = index.get(e)
            if k is None:
                raise InvalidInputError(f"tree edge {e} is not an edge of the model")
            total += float(mu.edge_marginals[k][x_m[e[0]], x_m[e[1]]])
        return total
    if len(mu) != tree.num_nodes:
        raise InvalidInputError("labeling does not match the tree's node count")
    agree = [a == b for a, b in zip(mu, x_m)]
    total = sum(1 - deg[i] for i in range(tree.num_nodes) if agree[i])
    total += sum(1 for i, j in tree.edges if agree[i] and agree[j])
    return float(total)


def separation_weights(mu_hat: FractionalPrimal, x_m: Labeling) -> np.ndarray:
    """Edge weights whose max-weight spanning tree maximizes the inequality value.

    Returned array is aligned with ``mu_hat.edges``.
    """
    if len(x_m) != len(mu_hat.node_marginals):
        raise InvalidInputError("excluded labeling does not match the marginals")
    node = [float(m[s]) for m, s in zip(mu_hat.node_marginals, x_m)]
    w = np.empty(len(mu_hat.edges))
    for k, ((i, j), table) in enumerate(zip(mu_hat.edges, mu_hat.edge_marginals)):
        w[k] = float(table[x_m[i], x_m[j]]) - node[i] - node[j]
    return w


def max_weight_spanning_tree(num_nodes: int, edges: Sequence[Edge],
                             weights: Sequence[float]) -> SpanningTree:
    """Kruskal on descending weight; equal weights keep canonical edge order."""
    edges = [_canonical(e) for e in edges]
    if len(weights) != len(edges):
        raise InvalidInputError("one weight per edge required")
    order = sorted(range(len(edges)), key=lambda k: (-float(weights[k]), edges[k]))
    uf = UnionFind(num_nodes)
    chosen = []
    for k in order:
        if uf.union(*edges[k]):
            chosen.append(edges[k])
            if len(chosen) == num_nodes - 1:
                break
    if len(chosen) != num_nodes - 1:
        raise InvalidInputError("graph is disconnected; no spanning tree exists")
    return SpanningTree(num_nodes, tuple(sorted(chosen)))


def _grid_shape(num_nodes: int, edges) -> Tuple[int, int] | None:
    """Rows/cols if ``edges`` is exactly a row-major 4-neighbour grid."""
    edge_set = set(edges)
    for rows in range(2, num_nodes):
        if num_nodes % rows:
            continue
        cols = num_nodes // rows
        if cols < 2 or len(edge_set) != rows * (cols - 1) + cols * (rows - 1):
            continue
        if all(((r * cols + c, r * cols + c + 1) in edge_set)
               for r in range(rows) for c in range(cols - 1)) and \
           all(((r * cols + c, (r + 1) * cols + c) in edge_set)
               for r in range(rows - 1) for c in range(cols)):
            return rows, cols
    return None


def _grid_cover(rows: int, cols: int) -> Tuple[SpanningTree, SpanningTree]:
    horizontal = [(r * cols + c, r * cols + c + 1) for r in range(rows) for c in range(cols - 1)]
    vertical = [(r * cols + c, (r + 1) * cols + c) for r in range(rows - 1) for c in range(cols)]
    first_column = [(r * cols, (r + 1) * cols) for r in range(rows - 1)]
    first_row = [(c, c + 1) for c in range(cols - 1)]
    n = rows * cols
    return (SpanningTree.from_edges(n, horizontal + first_column),
            SpanningTree.from_edges(n, vertical + first_row))


def build_tree_cover(model: MrfModel) -> TreeCover:
    """Spanning-tree cover: the tree itself, the two-tree grid cover, or greedy."""
    n = model.num_nodes
    edges = model.edges
    if not model.is_connected():
        raise InvalidInputError("tree covers require a connected graph")
    if len(edges) == n - 1:
        trees = (SpanningTree.from_edges(n, edges),)
    else:
        shape = _grid_shape(n, edges)
        if shape is not None:
            trees = _grid_cover(*shape)
        else:
            covered = [False] * len(edges)
            trees = []
            while not all(covered):
                weights = [0.0 if c else 1.0 for c in covered]
                tree = max_weight_spanning_tree(n, edges, weights)
                members = set(tree.edges)
                covered = [c or e in members for c, e in zip(covered, edges)]
                trees.append(tree)
            trees = tuple(trees)
    members = [set(t.edges) for t in trees]
    multiplicity = tuple(sum(e in m for m in members) for e in edges)
    return TreeCover(tuple(trees), edges, multiplicity)


def split_energies(model: MrfModel, cover: TreeCover) -> SplitEnergies:
    """Node energies divided evenly over all trees, edge energies over covering trees."""
    p = len(cover.trees)
    unary = tuple(tuple(u / p for u in model.unary) for _ in cover.trees)
    index = model.edge_index
    pairwise = []
    for tree in cover.trees:
        tables = {}
        for e in tree.edges:
            k = index[e]
            tables[k] = model.pairwise[k] / cover.edge_multiplicity[k]
        pairwise.append(tables)
    return SplitEnergies(cover, unary, tuple(pairwise))


"""Pairwise discrete MRF: topology, energy tables, labelings and the
indicator (marginal) view of a labeling.

Edges are stored canonically as ``(i, j)`` with ``i < j`` and every pairwise
table is indexed ``[x_i, x_j]`` in that orientation. Labels are 0-based.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Sequence, Tuple, Union

import numpy as np

from .exceptions import InvalidInputError, ModelFormatError

Labeling = Tuple[int, ...]
Edge = Tuple[int, int]


def _frozen(array) -> np.ndarray:
    out = np.array(array, dtype=np.float64, copy=True)
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class MrfModel:
    """Graph plus unary and pairwise energy tables.

    Edges may be passed in either orientation; a reversed edge has its table
    transposed so that rows always follow the smaller node id.
    """

    num_nodes: int
    cardinalities: Tuple[int, ...]
    edges: Tuple[Edge, ...]
    unary: Tuple[np.ndarray, ...]
    pairwise: Tuple[np.ndarray, ...]

    def __post_init__(self):
        n = int(self.num_nodes)
        if n < 1:
            raise InvalidInputError(f"num_nodes must be positive, got {self.num_nodes}")
        cards = tuple(int(c) for c in self.cardinalities)
        if len(cards) != n:
            raise InvalidInputError(f"expected {n} cardinalities, got {len(cards)}")
        if any(c < 1 for c in cards):
            raise InvalidInputError("every node needs at least one label")
        if len(self.unary) != n:
            raise InvalidInputError(f"expected {n} unary tables, got {len(self.unary)}")
        if len(self.pairwise) != len(self.edges):
            raise InvalidInputError(
                f"{len(self.edges)} edges but {len(self.pairwise)} pairwise tables")

        unary = []
        for i, (table, card) in enumerate(zip(self.unary, cards)):
            table = _frozen(table)
            if table.shape != (card,):
                raise InvalidInputError(
                    f"unary[{i}] has shape {table.shape}, expected ({card},)")
            if not np.all(np.isfinite(table)):
                raise InvalidInputError(f"unary[{i}] contains non-finite energies")
            unary.append(table)

        edges, pairwise, seen = [], [], set()
        for k, (edge, table) in enumerate(zip(self.edges, self.pairwise)):
            i, j = (int(v) for v in edge)
            if not (0 <= i < n and 0 <= j < n):
                raise InvalidInputError(f"edge {k} = {edge} references a missing node")
            if i == j:
                raise InvalidInputError(f"edge {k} = {edge} is a self-loop")
            table = np.asarray(table, dtype=np.float64)
            if i > j:
                i, j = j, i
                table = table.T
            if (i, j) in seen:
                raise InvalidInputError(f"duplicate edge ({i}, {j})")
            seen.add((i, j))
            if table.shape != (cards[i], cards[j]):
                raise InvalidInputError(
                    f"pairwise[{k}] has shape {table.shape}, "
                    f"expected ({cards[i]}, {cards[j]})")
            if not np.all(np.isfinite(table)):
                raise InvalidInputError(f"pairwise[{k}] contains non-finite energies")
            edges.append((i, j))
            pairwise.append(_frozen(table))

        object.__setattr__(self, "num_nodes", n)
        object.__setattr__(self, "cardinalities", cards)
        object.__setattr__(self, "edges", tuple(edges))
        object.__setattr__(self, "unary", tuple(unary))
        object.__setattr__(self, "pairwise", tuple(pairwise))

    def __eq__(self, other):
        if not isinstance(other, MrfModel):
            return NotImplemented
        return (self.num_nodes == other.num_nodes
                and self.cardinalities == other.cardinalities
                and self.edges == other.edges
                and all(np.array_equal(a, b) for a, b in zip(self.unary, other.unary))
                and all(np.array_equal(a, b) for a, b in zip(self.pairwise, other.pairwise)))

    __hash__ = None

    @cached_property
    def edge_index(self) -> dict:
        return {e: k for k, e in enumerate(self.edges)}

    @cached_property
    def neighbors(self) -> Tuple[Tuple[int, ...], ...]:
        adj = [[] for _ in range(self.num_nodes)]
        for i, j in self.edges:
            adj[i].append(j)
            adj[j].append(i)
        return tuple(tuple(sorted(a)) for a in adj)

    @property
    def max_cardinality(self) -> int:
        return max(self.cardinalities)

    def num_labelings(self) -> int:
        return math.prod(self.cardinalities)

    def is_connected(self) -> bool:
        seen = {0}
        stack = [0]
        while stack:
            for v in self.neighbors[stack.pop()]:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        return len(seen) == self.num_nodes

    def is_tree(self) -> bool:
        return len(self.edges) == self.num_nodes - 1 and self.is_connected()

    def with_energies(self, unary, pairwise) -> "MrfModel":
        """Same topology, new tables (aligned with ``self.edges``)."""
        return MrfModel(self.num_nodes, self.cardinalities, self.edges,
                        tuple(unary), tuple(pairwise))


def check_labeling(model: MrfModel, x: Sequence[int]) -> Labeling:
    """Validate ``x`` against ``model`` and return it as a tuple of ints."""
    if len(x) != model.num_nodes:
        raise InvalidInputError(
            f"labeling has {len(x)} entries, model has {model.num_nodes} nodes")
    out = tuple(int(v) for v in x)
    for i, (v, card) in enumerate(zip(out, model.cardinalities)):
        if not 0 <= v < card:
            raise InvalidInputError(f"label {v} at node {i} outside [0, {card})")
    return out


def energy(model: MrfModel, x: Sequence[int]) -> float:
    """Total energy: unary terms in node order, then pairwise terms in edge order."""
    x = check_labeling(model, x)
    total = 0.0
    for i, table in enumerate(model.unary):
        total += float(table[x[i]])
    for (i, j), table in zip(model.edges, model.pairwise):
        total += float(table[x[i], x[j]])
    return total


@dataclass(frozen=True, eq=False)
class FractionalPrimal:
    """Node and edge marginals over a fixed edge list (a point of the local polytope)."""

    edges: Tuple[Edge, ...]
    node_marginals: Tuple[np.ndarray, ...]
    edge_marginals: Tuple[np.ndarray, ...]

    @cached_property
    def edge_index(self) -> dict:
        return {e: k for k, e in enumerate(self.edges)}

    @classmethod
    def from_labeling(cls, model: MrfModel, x: Sequence[int]) -> "FractionalPrimal":
        x = check_labeling(model, x)
        nodes = []
        for i, card in enumerate(model.cardinalities):
            mu = np.zeros(card)
            mu[x[i]] = 1.0
            nodes.append(mu)
        edge_tables = []
        for i, j in model.edges:
            mu = np.zeros((model.cardinalities[i], model.cardinalities[j]))
            mu[x[i], x[j]] = 1.0
            edge_tables.append(mu)
        return cls(model.edges, tuple(nodes), tuple(edge_tables))

    @classmethod
    def zeros(cls, model: MrfModel) -> "FractionalPrimal":
        nodes = tuple(np.zeros(c) for c in model.cardinalities)
        edge_tables = tuple(np.zeros((model.cardinalities[i], model.cardinalities[j]))
                            for i, j in model.edges)
        return cls(model.edges, nodes, edge_tables)

    def in_local_polytope(self, tol: float = 1e-9) -> bool:
        for mu in self.node_marginals:
            if np.any(mu < -tol) or np.any(mu > 1 + tol) or abs(mu.sum() - 1.0) > tol:
                return False
        for (i, j), mu in zip(self.edges, self.edge_marginals):
            if np.any(mu < -tol) or np.any(mu > 1 + tol):
                return False
            if np.max(np.abs(mu.sum(axis=1) - self.node_marginals[i])) > tol:
                return False
            if np.max(np.abs(mu.sum(axis=0) - self.node_marginals[j])) > tol:
                return False
        return True


def linear_energy(model: MrfModel, mu: FractionalPrimal) -> float:
    """Inner product of the energy vector with a marginal vector."""
    if mu.edges != model.edges:
        raise InvalidInputError("marginals are defined over a different edge list")
    total = 0.0
    for theta, m in zip(model.unary, mu.node_marginals):
        total += float(np.dot(theta, m))
    for theta, m in zip(model.pairwise, mu.edge_marginals):
        total += float(np.sum(theta * m))
    return total


# -- file format -------------------------------------------------------------

def model_to_dict(model: MrfModel) -> dict:
    return {
        "num_nodes": model.num_nodes,
        "cardinalities": list(model.cardinalities),
        "edges": [list(e) for e in model.edges],
        "unary": [t.tolist() for t in model.unary],
        "pairwise": [t.tolist() for t in model.pairwise],
    }


def _field(doc, name, source):
    if name not in doc:
        raise ModelFormatError(f"{source}: missing field '{name}'")
    return doc[name]


def _real(value, where, source):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ModelFormatError(f"{source}: {where}: expected a number, got {value!r}")
    if not math.isfinite(value):
        raise ModelFormatError(f"{source}: {where}: non-finite energy")
    return float(value)


def model_from_dict(doc: dict, source: str = "<model>") -> MrfModel:
    """Build a model from the parsed document, reporting the offending field."""
    if not isinstance(doc, dict):
        raise ModelFormatError(f"{source}: top level must be an object")
    n = _field(doc, "num_nodes", source)
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise ModelFormatError(f"{source}: field 'num_nodes': expected a positive integer")
    cards = _field(doc, "cardinalities", source)
    if not isinstance(cards, list) or len(cards) != n:
        raise ModelFormatError(f"{source}: field 'cardinalities': expected {n} entries")
    for i, c in enumerate(cards):
        if isinstance(c, bool) or not isinstance(c, int) or c < 1:
            raise ModelFormatError(
                f"{source}: field 'cardinalities[{i}]': expected a positive integer")

    unary_doc = _field(doc, "unary", source)
    if not isinstance(unary_doc, list) or len(unary_doc) != n:
        raise ModelFormatError(f"{source}: field 'unary': expected {n} tables")
    unary = []
    for i, row in enumerate(unary_doc):
        if not isinstance(row, list) or len(row) != cards[i]:
            got = len(row) if isinstance(row, list) else type(row).__name__
            raise ModelFormatError(
                f"{source}: field 'unary[{i}]': expected {cards[i]} entries, got {got}")
        unary.append([_real(v, f"unary[{i}][{s}]", source) for s, v in enumerate(row)])

    edges_doc = _field(doc, "edges", source)
    pair_doc = _field(doc, "pairwise", source)
    if not isinstance(edges_doc, list):
        raise ModelFormatError(f"{source}: field 'edges': expected a list")
    if not isinstance(pair_doc, list) or len(pair_doc) != len(edges_doc):
        raise ModelFormatError(
            f"{source}: field 'pairwise': expected {len(edges_doc)} tables")
    edges, pairwise = [], []
    for k, (edge, table) in enumerate(zip(edges_doc, pair_doc)):
        if (not isinstance(edge, list) or len(edge) != 2
                or not all(isinstance(v, int) and not isinstance(v, bool) for v in edge)):
            raise ModelFormatError(f"{source}: field 'edges[{k}]': expected [i, j]")
        i, j = edge
        if not (0 <= i < n and 0 <= j < n) or i == j:
            raise ModelFormatError(f"{source}: field 'edges[{k}]': invalid edge {edge}")
        if i > j:
            raise ModelFormatError(
                f"{source}: field 'edges[{k}]': edges must be written as [min, max]")
        rows = cards[i]
        cols = cards[j]
        if not isinstance(table, list) or len(table) != rows:
            raise ModelFormatError(
                f"{source}: field 'pairwise[{k}]': expected {rows} rows")
        parsed = []
        for s, row in enumerate(table):
            if not isinstance(row, list) or len(row) != cols:
                raise ModelFormatError(
                    f"{source}: field 'pairwise[{k}][{s}]': expected {cols} entries")
            parsed.append([_real(v, f"pairwise[{k}][{s}][{t}]", source)
                           for t, v in enumerate(row)])
        edges.append((i, j))
        pairwise.append(parsed)
    try:
        return MrfModel(n, tuple(cards), tuple(edges), tuple(unary), tuple(pairwise))
    except InvalidInputError as exc:
        raise ModelFormatError(f"{source}: {exc}") from exc


def dumps_model(model: MrfModel) -> str:
    return json.dumps(model_to_dict(model), indent=1) + "\n"


def save_model(model: MrfModel, path: Union[str, Path]) -> None:
    Path(path).write_text(dumps_model(model))


def load_model(path: Union[str, Path]) -> MrfModel:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ModelFormatError(f"{path}: {exc.strerror}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelFormatError(
            f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    return model_from_dict(doc, str(path))

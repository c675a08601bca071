"""M-best MAP by Lagrangian relaxation of the spanning-tree inequalities.

Two solve paths share the same outer structure (rounds of supergradient
steps, best-so-far primal and dual bookkeeping, the same stopping rules):

* ``solve_tree_mbest_step``: tree models. One inequality per excluded
  labeling; the perturbed model stays a tree and is minimized exactly.
* ``solve_general_mbest_step``: any connected model. A tree cover plus
  one tree subproblem per active inequality, coupled through consensus
  multipliers ``delta``; active inequalities are added by a max-weight
  spanning tree separation step before each round.

Stepsize is ``1 / (eta + 1)`` where ``eta`` counts the iterations at which
the dual value went down relative to the previous iteration.
"""
from __future__ import annotations

import csv
import math
import time
from dataclasses import dataclass, field, replace
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .exceptions import BudgetExhaustedError, InvalidInputError, InvalidStateError
from .model import FractionalPrimal, Labeling, MrfModel, check_labeling, energy
from .stcover import (
    SpanningTree,
    SplitEnergies,
    build_tree_cover,
    max_weight_spanning_tree,
    separation_weights,
    split_energies,
    tree_inequality_value,
)
from .treebp import min_sum, table_energy, tree_map, tree_order

CERTIFIED = "certified-optimal"
LOWER_BOUND_ONLY = "lower-bound-only"

ZERO_SUM_TOL = 1e-9


@dataclass(frozen=True)
class SolverConfig:
    tolerance: float = 1e-6
    inner_iterations: int = 20
    max_rounds: int = 200
    stall_tolerance: float = 1e-9
    edge_consensus: bool = True

    def __post_init__(self):
        if not self.tolerance > 0:
            raise InvalidInputError("tolerance must be positive")
        if self.inner_iterations < 1 or self.max_rounds < 1:
            raise InvalidInputError("iteration budgets must be positive")


# -- traces -------------------------------------------------------------------

@dataclass(frozen=True)
class TraceRecord:
    outer_round: int
    t: int
    dual_value: float
    best_dual: float
    best_primal: Optional[float]
    active_set_size: int
    alpha: float
    eta: int


TRACE_COLUMNS = ("outer_round", "t", "dual_value", "best_dual",
                 "best_primal_energy_or_empty", "active_set_size", "alpha", "eta")


@dataclass
class SolveTrace:
    records: List[TraceRecord] = field(default_factory=list)

    def __len__(self):
        return len(self.records)

    def rows(self) -> List[list]:
        return [[r.outer_round, r.t, repr(r.dual_value), repr(r.best_dual),
                 "" if r.best_primal is None else repr(r.best_primal),
                 r.active_set_size, repr(r.alpha), r.eta] for r in self.records]


def write_trace_csv(path, traces: Sequence[Tuple[int, SolveTrace]]) -> None:
    """One row per inner iteration; the leading ``m`` column names the solve step."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(("m",) + TRACE_COLUMNS)
        for m, trace in traces:
            for row in trace.rows():
                writer.writerow([m] + row)


# -- results ------------------------------------------------------------------

@dataclass
class StepResult:
    labeling: Labeling
    energy: float
    dual_bound: float
    trace: SolveTrace
    rounds: int
    iterations: int

    @property
    def gap(self) -> float:
        return self.energy - self.dual_bound


@dataclass
class Solution:
    labeling: Labeling
    energy: float
    dual_bound: float
    status: str
    trace: SolveTrace
    rounds: int = 0
    iterations: int = 0
    cpu_seconds: float = 0.0


@dataclass
class SolveResult:
    solutions: List[Solution]

    @property
    def labelings(self) -> List[Labeling]:
        return [s.labeling for s in self.solutions]

    @property
    def energies(self) -> List[float]:
        return [s.energy for s in self.solutions]

    @property
    def dual_bounds(self) -> List[float]:
        return [s.dual_bound for s in self.solutions]

    @property
    def statuses(self) -> List[str]:
        return [s.status for s in self.solutions]


# -- dual state and projections -------------------------------------------------

def stepsize(eta: int) -> float:
    return 1.0 / (eta + 1)


def count_decrease(eta: int, previous_value: Optional[float], value: float) -> int:
    if previous_value is not None and value < previous_value:
        return eta + 1
    return eta


def project_positive(values: np.ndarray) -> np.ndarray:
    return np.maximum(values, 0.0)


def project_zero_sum(delta: np.ndarray) -> np.ndarray:
    """Subtract, for every (node, label), the mean over subproblems (axis 0)."""
    if delta.shape[0] == 0:
        return delta.copy()
    return delta - delta.mean(axis=0, keepdims=True)


def project_zero_sum_masked(edge_delta: np.ndarray, mask: np.ndarray) -> np.ndarray:
    """Zero-mean projection of edge multipliers over the subproblems holding each edge.

    ``edge_delta`` has shape (subproblems, edges, L, L) and ``mask`` (subproblems,
    edges) marks membership; entries outside the mask are set to zero.
    """
    if edge_delta.shape[0] == 0:
        return edge_delta.copy()
    weights = mask[:, :, None, None].astype(float)
    counts = np.maximum(weights.sum(axis=0, keepdims=True), 1.0)
    mean = (edge_delta * weights).sum(axis=0, keepdims=True) / counts
    return (edge_delta - mean) * weights


@dataclass
class ActiveSet:
    """Active spanning-tree inequalities, ``per_m[m]`` for excluded labeling m.

    ``order`` lists ``(m, tree)`` in insertion order; it fixes the position of
    each factor's multiplier and consensus block.
    """

    per_m: List[List[SpanningTree]]
    order: List[Tuple[int, SpanningTree]] = field(default_factory=list)

    @classmethod
    def empty(cls, num_excluded: int) -> "ActiveSet":
        return cls([[] for _ in range(num_excluded)])

    def copy(self) -> "ActiveSet":
        return ActiveSet([list(trees) for trees in self.per_m], list(self.order))

    def add(self, m: int, tree: SpanningTree) -> bool:
        if tree in self.per_m[m]:
            return False
        self.per_m[m].append(tree)
        self.order.append((m, tree))
        return True

    def __len__(self):
        return len(self.order)


@dataclass
class DualState:
    """Multipliers of the expanded Lagrangian.

    Subproblem axis order is cover trees first, then inequality factors in
    ``ActiveSet.order``; ``lam[f]`` belongs to factor ``f``.

    * ``delta``: (subproblems, nodes, max_card) node consensus multipliers.
    * ``edge_delta``: (subproblems, edges, max_card, max_card) edge consensus
      multipliers, nonzero only where ``edge_mask`` says the subproblem
      contains the edge.
    """

    lam: np.ndarray
    delta: np.ndarray
    edge_delta: np.ndarray
    edge_mask: np.ndarray
    eta: int = 0
    t: int = 0
    last_value: Optional[float] = None

    @classmethod
    def initial(cls, tree_edge_masks: np.ndarray, num_nodes: int, max_card: int) -> "DualState":
        mask = np.asarray(tree_edge_masks, dtype=bool)
        p, num_edges = mask.shape
        return cls(np.zeros(0), np.zeros((p, num_nodes, max_card)),
                   np.zeros((p, num_edges, max_card, max_card)), mask)

    @property
    def num_subproblems(self) -> int:
        return self.delta.shape[0]

    def with_factors(self, factor_edge_masks: np.ndarray) -> "DualState":
        """Append zero multipliers and consensus blocks for new factors, then re-project."""
        masks = np.asarray(factor_edge_masks, dtype=bool).reshape(-1, self.edge_mask.shape[1])
        count = masks.shape[0]
        if count == 0:
            return self
        _, n, width = self.delta.shape
        lam = np.concatenate([self.lam, np.zeros(count)])
        delta = np.concatenate([self.delta, np.zeros((count, n, width))])
        mask = np.concatenate([self.edge_mask, masks])
        edge_delta = np.concatenate(
            [self.edge_delta, np.zeros((count,) + self.edge_delta.shape[1:])])
        return replace(self, lam=lam, delta=project_zero_sum(delta),
                       edge_delta=project_zero_sum_masked(edge_delta, mask), edge_mask=mask)

    def zero_sum_residual(self) -> float:
        node = np.abs(self.delta.sum(axis=0)).max() if self.delta.size else 0.0
        edge = np.abs(self.edge_delta.sum(axis=0)).max() if self.edge_delta.size else 0.0
        return float(max(node, edge))


def dual_update(dual: DualState, lambda_grad: np.ndarray, delta_grad: np.ndarray,
                value: float, alpha: Optional[float] = None,
                edge_grad: Optional[np.ndarray] = None) -> DualState:
    """One projected supergradient step.

    ``value`` is the dual value at ``dual``; it advances ``eta`` when lower
    than the previous iteration's value. Without an explicit ``alpha`` the
    step is ``1 / (eta + 1)`` with the advanced ``eta``. Edge multipliers
    move only when ``edge_grad`` is given.
    """
    eta = count_decrease(dual.eta, dual.last_value, value)
    if alpha is None:
        alpha = stepsize(eta)
    lam = project_positive(dual.lam + alpha * np.asarray(lambda_grad, dtype=float))
    delta = project_zero_sum(dual.delta + alpha * np.asarray(delta_grad, dtype=float))
    edge_delta = dual.edge_delta
    if edge_grad is not None:
        edge_delta = project_zero_sum_masked(edge_delta + alpha * edge_grad, dual.edge_mask)
    return replace(dual, lam=lam, delta=delta, edge_delta=edge_delta, eta=eta,
                   t=dual.t + 1, last_value=value)


# -- tree models ------------------------------------------------------------------

def _tree_degrees(model: MrfModel) -> List[int]:
    deg = [0] * model.num_nodes
    for i, j in model.edges:
        deg[i] += 1
        deg[j] += 1
    return deg


def _perturbed_tables(model, degrees, previous, lam):
    unary = [np.array(u) for u in model.unary]
    pairwise = [np.array(p) for p in model.pairwise]
    for x_m, weight in zip(previous, lam):
        if weight == 0.0:
            continue
        for i, s in enumerate(x_m):
            unary[i][s] += weight * (1 - degrees[i])
        for k, (i, j) in enumerate(model.edges):
            pairwise[k][x_m[i], x_m[j]] += weight
    return unary, pairwise


def perturbed_tree_potentials(model: MrfModel, previous: Sequence[Labeling],
                              lam: Sequence[float]) -> MrfModel:
    """Fold the weighted tree inequalities into the model's energy tables."""
    if not model.is_tree():
        raise InvalidInputError("perturbed potentials are defined for tree models only")
    if len(lam) != len(previous):
        raise InvalidInputError("one multiplier per excluded labeling required")
    previous = [check_labeling(model, x) for x in previous]
    unary, pairwise = _perturbed_tables(model, _tree_degrees(model), previous,
                                        [float(v) for v in lam])
    return model.with_energies(unary, pairwise)


def _check_previous(model: MrfModel, previous) -> List[Labeling]:
    previous = [check_labeling(model, x) for x in previous]
    if len(set(previous)) != len(previous):
        raise InvalidInputError("excluded labelings must be pairwise distinct")
    return previous


class _Bookkeeping:
    """Best primal / best dual tracking and the trace shared by both solvers."""

    def __init__(self, model, previous, config):
        self.model = model
        self.excluded = set(previous)
        self.config = config
        self.best_x = None
        self.best_energy = math.inf
        self.best_dual = -math.inf
        self.trace = SolveTrace()
        self.iterations = 0

    def offer(self, candidates) -> None:
        found = extract_primal_candidates(self.model, candidates, self.excluded)
        if found is not None and found[1] < self.best_energy:
            self.best_x, self.best_energy = found

    def record(self, outer_round, value, active_size, alpha, eta) -> None:
        self.best_dual = max(self.best_dual, value)
        best = None if self.best_x is None else self.best_energy
        self.trace.records.append(TraceRecord(outer_round, self.iterations, value,
                                              self.best_dual, best, active_size, alpha, eta))
        self.iterations += 1

    def gap_closed(self) -> bool:
        return self.best_x is not None and \
            self.best_energy - self.best_dual <= self.config.tolerance

    def result(self, rounds) -> StepResult:
        if self.best_x is None:
            raise BudgetExhaustedError(
                f"no exclusion-feasible labeling found in {self.iterations} iterations",
                dual_bound=self.best_dual, trace=self.trace)
        return StepResult(self.best_x, self.best_energy, self.best_dual, self.trace,
                          rounds, self.iterations)


def solve_tree_mbest_step(model: MrfModel, previous: Sequence[Labeling],
                          config: SolverConfig = SolverConfig()) -> StepResult:
    """Best labeling of a tree model that differs from every excluded one.

    Projected supergradient ascent on the multipliers of the excluded
    labelings' tree inequalities.
    """
    if not model.is_tree():
        raise InvalidInputError("tree solver requires a tree-structured model")
    previous = _check_previous(model, previous)
    tree = SpanningTree.from_edges(model.num_nodes, model.edges)
    degrees = _tree_degrees(model)
    order = tree_order(model.num_nodes, model.edges)
    book = _Bookkeeping(model, previous, config)
    lam = np.zeros(len(previous))
    eta, last_value = 0, None
    rounds = 0
    for rounds in range(1, config.max_rounds + 1):
        dual_at_start = book.best_dual
        for _ in range(config.inner_iterations):
            unary, pairwise = _perturbed_tables(model, degrees, previous, lam)
            x_hat = min_sum(order, unary, pairwise)
            value = table_energy(model.edges, unary, pairwise, x_hat)
            eta = count_decrease(eta, last_value, value)
            alpha = stepsize(eta)
            last_value = value
            book.offer([x_hat])
            book.record(rounds, value, len(previous), alpha, eta)
            grad = np.array([tree_inequality_value(x_hat, x_m, tree) for x_m in previous])
            lam = project_positive(lam + alpha * grad)
            if book.gap_closed():
                return book.result(rounds)
        if book.best_dual - dual_at_start < config.stall_tolerance:
            break
    return book.result(rounds)


# -- general models ---------------------------------------------------------------

def dsm_constraint_management(mu_hat: FractionalPrimal, previous: Sequence[Labeling],
                              active: ActiveSet) -> ActiveSet:
    """Add, for every excluded labeling, the most violated spanning-tree inequality."""
    out = active.copy()
    num_nodes = len(mu_hat.node_marginals)
    for m, x_m in enumerate(previous):
        weights = separation_weights(mu_hat, x_m)
        out.add(m, max_weight_spanning_tree(num_nodes, mu_hat.edges, weights))
    return out


class _Decomposition:
    """Subproblem construction for one model and tree cover."""

    def __init__(self, model: MrfModel, split: SplitEnergies):
        self.model = model
        self.split = split
        self.cover = split.cover
        self.cards = model.cardinalities
        index = model.edge_index
        self.tree_edges = []
        self.tree_edge_ids = []
        self.tree_orders = []
        self.tree_pairwise = []
        for tree, tables in zip(self.cover.trees, split.pairwise):
            self.tree_edges.append(tree.edges)
            self.tree_edge_ids.append([index[e] for e in tree.edges])
            self.tree_orders.append(tree_order(model.num_nodes, tree.edges))
            self.tree_pairwise.append([tables[index[e]] for e in tree.edges])
        self._factor_orders = {}

    def edge_mask(self, tree: SpanningTree) -> np.ndarray:
        mask = np.zeros(len(self.model.edges), dtype=bool)
        for e in tree.edges:
            k = self.model.edge_index.get(e)
            if k is None:
                raise InvalidInputError(f"tree edge {e} is not an edge of the model")
            mask[k] = True
        return mask

    def cover_masks(self) -> np.ndarray:
        return np.array([self.edge_mask(t) for t in self.cover.trees]).reshape(
            len(self.cover.trees), len(self.model.edges))

    def factor_order(self, tree: SpanningTree):
        order = self._factor_orders.get(tree)
        if order is None:
            order = self._factor_orders[tree] = tree_order(tree.num_nodes, tree.edges)
        return order

    def subproblems(self, active: ActiveSet, dual: DualState, previous):
        """Yield (edges, edge ids, order, unary, pairwise) per subproblem in dual order."""
        cards = self.cards
        n = self.model.num_nodes
        index = self.model.edge_index
        edge_delta = dual.edge_delta
        for k in range(len(self.cover.trees)):
            unary = [self.split.unary[k][i] + dual.delta[k, i, :cards[i]] for i in range(n)]
            pairwise = [table + edge_delta[k, e, :cards[i], :cards[j]]
                        for table, e, (i, j) in zip(self.tree_pairwise[k],
                                                    self.tree_edge_ids[k], self.tree_edges[k])]
            yield self.tree_edges[k], self.tree_edge_ids[k], self.tree_orders[k], unary, pairwise
        p = len(self.cover.trees)
        for f, (m, tree) in enumerate(active.order):
            x_m = previous[m]
            weight = float(dual.lam[f])
            deg = tree.degrees
            unary = []
            for i in range(n):
                u = dual.delta[p + f, i, :cards[i]].copy()
                u[x_m[i]] += weight * (1 - deg[i])
                unary.append(u)
            ids = [index[e] for e in tree.edges]
            pairwise = []
            for (i, j), e in zip(tree.edges, ids):
                table = edge_delta[p + f, e, :cards[i], :cards[j]].copy()
                table[x_m[i], x_m[j]] += weight
                pairwise.append(table)
            yield tree.edges, ids, self.factor_order(tree), unary, pairwise

    def evaluate(self, active, dual, previous):
        """Dual value, per-subproblem argmins and the edge ids of each subproblem."""
        residual = dual.zero_sum_residual()
        if residual > ZERO_SUM_TOL:
            raise InvalidStateError(
                f"consensus multipliers violate the zero-sum constraint by {residual:.3g}")
        if dual.num_subproblems != len(self.cover.trees) + len(active):
            raise InvalidStateError("dual state does not match the active set")
        total = 0.0
        argmins = []
        edge_ids = []
        for edges, ids, order, unary, pairwise in self.subproblems(active, dual, previous):
            x = min_sum(order, unary, pairwise)
            total += table_energy(edges, unary, pairwise, x)
            argmins.append(x)
            edge_ids.append(ids)
        return total, argmins, edge_ids


def evaluate_expanded_lagrangian(split: SplitEnergies, active: ActiveSet, dual: DualState,
                                 previous: Sequence[Labeling], model: MrfModel):
    """Dual value at ``(lam, delta)`` and the minimizer of every subproblem.

    Subproblem order: cover trees, then inequality factors in ``active.order``.
    """
    value, argmins, _ = _Decomposition(model, split).evaluate(active, dual, list(previous))
    return value, argmins


def initial_dual_state(model: MrfModel, split: SplitEnergies) -> DualState:
    """All-zero multipliers for the cover trees of ``split`` (no active factors)."""
    masks = _Decomposition(model, split).cover_masks()
    return DualState.initial(masks, model.num_nodes, model.max_cardinality)


def extract_primal_candidates(model: MrfModel, candidates: Sequence[Labeling],
                              previous) -> Optional[Tuple[Labeling, float]]:
    """Lowest-energy candidate that differs from every excluded labeling."""
    excluded = previous if isinstance(previous, (set, frozenset)) else set(map(tuple, previous))
    best = None
    for x in dict.fromkeys(tuple(c) for c in candidates):
        if x in excluded:
            continue
        e = energy(model, x)
        if best is None or e < best[1]:
            best = (x, e)
    return best


class _RunningAverage:
    """Ergodic average of subproblem indicator vectors.

    Node marginals average over every subproblem; edge marginals over the
    cover trees containing the edge.
    """

    def __init__(self, model: MrfModel, cover):
        self.model = model
        self.cover = cover
        self.node_sum = [np.zeros(c) for c in model.cardinalities]
        self.node_count = 0
        self.edge_sum = [np.zeros((model.cardinalities[i], model.cardinalities[j]))
                         for i, j in model.edges]
        self.edge_count = [0] * len(model.edges)
        index = model.edge_index
        self.tree_edge_ids = [[index[e] for e in tree.edges] for tree in cover.trees]

    def add(self, argmins) -> None:
        edges = self.model.edges
        for x in argmins:
            for i, s in enumerate(x):
                self.node_sum[i][s] += 1.0
        self.node_count += len(argmins)
        for ids, x in zip(self.tree_edge_ids, argmins):
            for k in ids:
                i, j = edges[k]
                self.edge_sum[k][x[i], x[j]] += 1.0
                self.edge_count[k] += 1

    def estimate(self) -> FractionalPrimal:
        if self.node_count == 0:
            return FractionalPrimal.zeros(self.model)
        nodes = tuple(s / self.node_count for s in self.node_sum)
        edge_tables = tuple(s / c if c else s.copy()
                            for s, c in zip(self.edge_sum, self.edge_count))
        return FractionalPrimal(self.model.edges, nodes, edge_tables)


def _supergradients(model, argmins, edge_ids, active: ActiveSet, previous, dual: DualState):
    num_trees = dual.num_subproblems - len(active)
    lam_grad = np.array([tree_inequality_value(argmins[num_trees + f], previous[m], tree)
                         for f, (m, tree) in enumerate(active.order)])
    delta_grad = np.zeros(dual.delta.shape)
    edge_grad = np.zeros(dual.edge_delta.shape)
    nodes = np.arange(model.num_nodes)
    for tau, (x, ids) in enumerate(zip(argmins, edge_ids)):
        delta_grad[tau, nodes, x] = 1.0
        for e in ids:
            i, j = model.edges[e]
            edge_grad[tau, e, x[i], x[j]] = 1.0
    return lam_grad, delta_grad, edge_grad


def solve_general_mbest_step(model: MrfModel, previous: Sequence[Labeling],
                             config: SolverConfig = SolverConfig()) -> StepResult:
    """Best labeling of a connected model that differs from every excluded one.

    Each round first adds the most violated inequality per excluded labeling
    (separating the running-average primal), then runs
    ``config.inner_iterations`` primal/dual iterations on the expanded
    Lagrangian. Stops when the gap closes, when a round neither adds an
    inequality nor improves the best dual, or when the round budget runs out.
    """
    if not model.is_connected():
        raise InvalidInputError("general solver requires a connected model")
    previous = _check_previous(model, previous)
    cover = build_tree_cover(model)
    split = split_energies(model, cover)
    decomposition = _Decomposition(model, split)
    average = _RunningAverage(model, cover)
    active = ActiveSet.empty(len(previous))
    dual = DualState.initial(decomposition.cover_masks(), model.num_nodes,
                             model.max_cardinality)
    book = _Bookkeeping(model, previous, config)
    rounds = 0
    for rounds in range(1, config.max_rounds + 1):
        grown = dsm_constraint_management(average.estimate(), previous, active)
        added = grown.order[len(active):]
        active = grown
        dual = dual.with_factors([decomposition.edge_mask(tree) for _, tree in added])
        dual_at_start = book.best_dual
        for _ in range(config.inner_iterations):
            value, argmins, edge_ids = decomposition.evaluate(active, dual, previous)
            eta = count_decrease(dual.eta, dual.last_value, value)
            alpha = stepsize(eta)
            book.offer(argmins)
            book.record(rounds, value, len(active), alpha, eta)
            lam_grad, delta_grad, edge_grad = _supergradients(
                model, argmins, edge_ids, active, previous, dual)
            dual = dual_update(dual, lam_grad, delta_grad, value, alpha,
                               edge_grad if config.edge_consensus else None)
            average.add(argmins)
            if book.gap_closed():
                return book.result(rounds)
        if not added and book.best_dual - dual_at_start < config.stall_tolerance:
            break
    return book.result(rounds)


# -- driver ---------------------------------------------------------------------

def solve_mbest(model: MrfModel, M: int, config: SolverConfig = SolverConfig()) -> SolveResult:
    """The M lowest-energy labelings, found one at a time.

    The m-th solve excludes the m - 1 labelings already returned. Each
    solution carries its dual lower bound and is marked certified when the
    primal-dual gap closed within ``config.tolerance``.
    """
    if M < 1:
        raise InvalidInputError("M must be at least 1")
    if not model.is_connected():
        raise InvalidInputError("model graph must be connected")
    if M > model.num_labelings():
        raise InvalidInputError(
            f"M = {M} exceeds the {model.num_labelings()} labelings of the model")
    is_tree = model.is_tree()
    step = solve_tree_mbest_step if is_tree else solve_general_mbest_step
    solutions: List[Solution] = []
    for m in range(1, M + 1):
        previous = [s.labeling for s in solutions]
        start = time.process_time()
        if m == 1 and is_tree:
            x, value = tree_map(model)
            solutions.append(Solution(x, energy(model, x), value, CERTIFIED, SolveTrace(),
                                      cpu_seconds=time.process_time() - start))
            continue
        try:
            res = step(model, previous, config)
        except BudgetExhaustedError as exc:
            exc.partial = SolveResult(solutions)
            raise
        status = CERTIFIED if res.gap <= config.tolerance else LOWER_BOUND_ONLY
        solutions.append(Solution(res.labeling, res.energy, res.dual_bound, status,
                                  res.trace, res.rounds, res.iterations,
                                  time.process_time() - start))
    return SolveResult(solutions)

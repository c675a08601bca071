"""Synthetic problem families and solver-vs-oracle experiment harness."""
from __future__ import annotations

import csv
import math
import time
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence

import numpy as np

from .exceptions import InvalidInputError
from .model import MrfModel
from .oracle import brute_force_mbest
from .solver import SolverConfig, solve_mbest

FAMILIES = ("random-tree", "grid-submodular-2label", "grid-general-4label")
ORACLE_CAP = 2 ** 20


@dataclass(frozen=True)
class GeneratorSpec:
    family: str
    n: int
    seed: int = 0
    labels: Optional[int] = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise InvalidInputError(f"unknown family {self.family!r}; expected one of {FAMILIES}")
        if self.n < 1:
            raise InvalidInputError("n must be at least 1")
        if self.family.startswith("grid") and math.isqrt(self.n) ** 2 != self.n:
            raise InvalidInputError(f"grid families need a square node count, got {self.n}")
        if self.labels is not None and self.labels < 1:
            raise InvalidInputError("label count must be positive")

    @property
    def label_count(self) -> int:
        if self.labels is not None:
            return self.labels
        return 2 if self.family == "grid-submodular-2label" else 4


def random_spanning_tree(n: int, rng: np.random.Generator) -> List[tuple]:
    """Uniform spanning tree of the complete graph by a random walk.

    The walk moves to a uniformly chosen other node each step; the edge used
    to first enter a node joins the tree.
    """
    if n == 1:
        return []
    current = int(rng.integers(n))
    visited = {current}
    edges = []
    while len(visited) < n:
        step = int(rng.integers(n - 1))
        nxt = step if step < current else step + 1
        if nxt not in visited:
            visited.add(nxt)
            edges.append((min(current, nxt), max(current, nxt)))
        current = nxt
    return edges


def grid_edges(side: int) -> List[tuple]:
    edges = []
    for r in range(side):
        for c in range(side):
            v = r * side + c
            if c + 1 < side:
                edges.append((v, v + 1))
            if r + 1 < side:
                edges.append((v, v + side))
    return edges


def make_submodular(table: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Raise the (0, 1) entry just enough (plus a margin in (0, 0.1]) when needed."""
    violation = table[0, 0] + table[1, 1] - table[0, 1] - table[1, 0]
    if violation > 0:
        table = table.copy()
        table[0, 1] += violation + 0.1 * (1.0 - rng.random())
    return table


def _gaussian_model(n, edges, labels, rng, submodular=False) -> MrfModel:
    unary = [rng.standard_normal(labels) for _ in range(n)]
    pairwise = []
    for _ in edges:
        table = rng.standard_normal((labels, labels))
        if submodular:
            table = make_submodular(table, rng)
        pairwise.append(table)
    return MrfModel(n, (labels,) * n, tuple(edges), tuple(unary), tuple(pairwise))


def generate(spec: GeneratorSpec) -> MrfModel:
    rng = np.random.default_rng(spec.seed)
    if spec.family == "random-tree":
        edges = random_spanning_tree(spec.n, rng)
        return _gaussian_model(spec.n, edges, spec.label_count, rng)
    edges = grid_edges(math.isqrt(spec.n))
    if spec.family == "grid-submodular-2label":
        if spec.label_count != 2:
            raise InvalidInputError("the submodular grid family is binary")
        return _gaussian_model(spec.n, edges, 2, rng, submodular=True)
    return _gaussian_model(spec.n, edges, spec.label_count, rng)


def chain_model(n: int, labels: int = 4, seed: int = 0) -> MrfModel:
    """Path graph 0-1-...-(n-1) with standard Gaussian energies (timing sweeps)."""
    rng = np.random.default_rng(seed)
    return _gaussian_model(n, [(i, i + 1) for i in range(n - 1)], labels, rng)


# -- experiments ---------------------------------------------------------------

REPORT_COLUMNS = ("family", "n", "seed", "m", "solver_energy", "oracle_energy_or_empty",
                  "dual_bound", "gap", "outer_rounds", "inner_iters_total", "cpu_seconds")


@dataclass(frozen=True)
class ReportRow:
    family: str
    n: int
    seed: int
    m: int
    solver_energy: float
    oracle_energy: Optional[float]
    dual_bound: float
    gap: float
    outer_rounds: int
    inner_iters_total: int
    cpu_seconds: Optional[float]

    @property
    def matches_oracle(self) -> Optional[bool]:
        if self.oracle_energy is None:
            return None
        return abs(self.solver_energy - self.oracle_energy) <= 1e-9

    def csv_row(self) -> list:
        def num(v):
            return "" if v is None else repr(float(v))
        return [self.family, self.n, self.seed, self.m, num(self.solver_energy),
                num(self.oracle_energy), num(self.dual_bound), num(self.gap),
                self.outer_rounds, self.inner_iters_total,
                "" if self.cpu_seconds is None else f"{self.cpu_seconds:.6f}"]


def solve_instance(spec: GeneratorSpec, M: int, config: SolverConfig = SolverConfig(),
                   use_oracle: bool = True, timing: bool = True):
    """Solve one generated instance; returns (report rows, SolveResult).

    With ``timing=False`` the cpu column is left empty so reports are
    byte-reproducible.
    """
    model = generate(spec)
    result = solve_mbest(model, M, config)
    truth = None
    if use_oracle and model.num_labelings() <= ORACLE_CAP:
        truth = [e for _, e in brute_force_mbest(model, M, cap=ORACLE_CAP)]
    rows = []
    for m, sol in enumerate(result.solutions, start=1):
        rows.append(ReportRow(
            family=spec.family, n=spec.n, seed=spec.seed, m=m,
            solver_energy=sol.energy,
            oracle_energy=None if truth is None else truth[m - 1],
            dual_bound=sol.dual_bound, gap=sol.energy - sol.dual_bound,
            outer_rounds=sol.rounds, inner_iters_total=sol.iterations,
            cpu_seconds=sol.cpu_seconds if timing else None))
    return rows, result


def run_experiment(spec: GeneratorSpec, M: int, config: SolverConfig = SolverConfig(),
                   use_oracle: bool = True, timing: bool = True) -> List[ReportRow]:
    """One report row per rank m for a generated instance."""
    return solve_instance(spec, M, config, use_oracle, timing)[0]


def run_sweep(specs: Iterable[GeneratorSpec], M: int, config: SolverConfig = SolverConfig(),
              use_oracle: bool = True, timing: bool = True) -> List[ReportRow]:
    rows = []
    for spec in specs:
        rows.extend(run_experiment(spec, M, config, use_oracle, timing))
    return rows


def write_report_csv(path, rows: Sequence[ReportRow]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(REPORT_COLUMNS)
        for row in rows:
            writer.writerow(row.csv_row())


def timing_sweep(sizes: Sequence[int], M: int = 2, labels: int = 4, seed: int = 0,
                 config: SolverConfig = SolverConfig()) -> List[tuple]:
    """CPU seconds of an M-best solve on chains of each size."""
    out = []
    for n in sizes:
        model = chain_model(n, labels, seed)
        start = time.process_time()
        solve_mbest(model, M, config)
        out.append((n, time.process_time() - start))
    return out


def fit_exponent(points: Sequence[tuple]) -> float:
    """Slope of log(time) against log(n)."""
    ns = np.log([p[0] for p in points])
    ts = np.log([max(p[1], 1e-9) for p in points])
    return float(np.polyfit(ns, ts, 1)[0])

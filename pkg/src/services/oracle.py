"""Exact minimum C4 counts by depth-first branch and bound.

Edges are chosen from the candidate cells in a fixed order. Adding edge
(x, y) creates sum over y' in N(x) of |N(y) & N(y')| new 4-cycles, so the
partial count only grows and a branch is cut once it reaches the incumbent.
The search is split into independent subtrees that never share incumbents;
results and node counts are therefore the same for any worker count.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, replace
from fractions import Fraction
from math import ceil

import numpy as np

from src.models.bounds import fraction_str
from src.models.errors import BudgetExceededError, InvalidParameterError, VerificationError
from src.models.graph import BipartiteGraph
from src.models.oracle import OracleResult, OracleStatus, OracleTableRow, SupergraphReport
from src.services.bounds import improved_lower_bound, plain_lower_bound
from src.services.budget import NodeBudget
from src.services.counting import count_c4
from src.services.difference_sets import completion_elements, development, singer_difference_set
from src.services.workers import map_tasks

logger = logging.getLogger(__name__)

Edge = tuple[int, int]


def _edge_delta(rows: list[int], cols: list[int], x: int, y: int) -> int:
    """New 4-cycles created by adding (x, y)."""
    total = 0
    nbrs = rows[x]
    col_y = cols[y]
    while nbrs:
        low = nbrs & -nbrs
        total += (col_y & cols[low.bit_length() - 1]).bit_count()
        nbrs ^= low
    return total


@dataclass(frozen=True, slots=True)
class _Subtree:
    """One independent piece of the search, picklable for worker processes."""

    n: int
    candidates: tuple[Edge, ...]
    start: int
    need: int
    fixed: tuple[Edge, ...]
    row_caps: tuple[int, ...]
    incumbent: int
    floor: int
    cap: int


@dataclass(slots=True)
class _SubtreeResult:
    best: int
    witness: list[Edge] | None
    nodes: int
    exceeded: bool


class _Search:
    def __init__(self, task: _Subtree) -> None:
        self.task = task
        self.rows = [0] * task.n
        self.cols = [0] * task.n
        self.degree = [0] * task.n
        self.chosen: list[Edge] = []
        self.best = task.incumbent
        self.witness: list[Edge] | None = None
        self.budget = NodeBudget(task.cap)

    def _add(self, x: int, y: int) -> int:
        delta = _edge_delta(self.rows, self.cols, x, y)
        self.rows[x] |= 1 << y
        self.cols[y] |= 1 << x
        self.degree[x] += 1
        return delta

    def _remove(self, x: int, y: int) -> None:
        self.rows[x] &= ~(1 << y)
        self.cols[y] &= ~(1 << x)
        self.degree[x] -= 1

    def run(self) -> _SubtreeResult:
        partial = 0
        for x, y in self.task.fixed:
            partial += self._add(x, y)
        exceeded = False
        try:
            if partial < self.best:
                self._dfs(self.task.start, self.task.need, partial)
        except BudgetExceededError:
            exceeded = True
        return _SubtreeResult(self.best, self.witness, self.budget.nodes, exceeded)

    def _dfs(self, start: int, need: int, partial: int) -> None:
        if need == 0:
            if partial < self.best:
                self.best = partial
                self.witness = sorted([*self.task.fixed, *self.chosen])
            return
        cands = self.task.candidates
        caps = self.task.row_caps
        for j in range(start, len(cands) - need + 1):
            x, y = cands[j]
            if self.degree[x] >= caps[x]:
                continue
            self.budget.spend()
            delta = _edge_delta(self.rows, self.cols, x, y)
            if partial + delta >= self.best:
                continue
            self._add(x, y)
            self.chosen.append((x, y))
            self._dfs(j + 1, need - 1, partial + delta)
            self.chosen.pop()
            self._remove(x, y)
            if self.best <= self.task.floor:
                return


def _run_subtree(task: _Subtree) -> _SubtreeResult:
    return _Search(task).run()


def _greedy(n: int, base: list[Edge], candidates: list[Edge], count: int) -> list[Edge]:
    """Add ``count`` candidates one by one, each the first with the fewest new 4-cycles."""
    rows = [0] * n
    cols = [0] * n
    for x, y in base:
        rows[x] |= 1 << y
        cols[y] |= 1 << x
    edges = list(base)
    remaining = [c for c in candidates if not rows[c[0]] >> c[1] & 1]
    for _ in range(count):
        best_i = min(range(len(remaining)), key=lambda i: _edge_delta(rows, cols, *remaining[i]))
        x, y = remaining.pop(best_i)
        rows[x] |= 1 << y
        cols[y] |= 1 << x
        edges.append((x, y))
    return sorted(edges)


def _candidate_order(cells: list[Edge], n: int, shuffle_seed: int | None) -> list[Edge]:
    if shuffle_seed is None:
        return sorted(cells)
    rng = np.random.default_rng(shuffle_seed)
    row_rank = rng.permutation(n)
    col_rank = rng.permutation(n)
    return sorted(cells, key=lambda c: (int(row_rank[c[0]]), int(col_rank[c[1]])))


def _improved_c4_bound(n: int, m: int) -> int:
    # a single row has no column pairs, so no 4-cycle
    return improved_lower_bound(n, m, 2, 2) if n >= 2 else 0


def min_c4_exhaustive(
    n: int,
    m: int,
    must_contain: BipartiteGraph | None = None,
    cap: int = 50_000_000,
    symmetry: bool = True,
    bound_cut: bool = False,
    shuffle_seed: int | None = None,
    incumbent_edges: list[Edge] | None = None,
    threads: int = 1,
) -> OracleResult:
    """Minimum number of 4-cycles over m-edge subgraphs of K_{n,n}.

    Args:
        n: Class size.
        m: Edge count.
        must_contain: Only supergraphs of this n x n graph are considered.
        cap: Node budget, split evenly over the independent subtrees.
        symmetry: Fix row 0 as a maximum-degree row whose neighbours are the
            first columns. Ignored with ``must_contain`` or ``shuffle_seed``.
        bound_cut: Stop as soon as the incumbent meets the improved bound.
        shuffle_seed: Order candidate cells by a seeded row/column relabelling.
        incumbent_edges: Edges of a known graph to start from (must contain
            ``must_contain`` and have m edges); the greedy graph otherwise.
        threads: Worker processes.

    Returns:
        An optimal result, or an inconclusive one when the budget runs out.
    """
    started = time.perf_counter()
    if n < 1 or not 0 <= m <= n * n:
        raise InvalidParameterError(f"need n >= 1 and 0 <= m <= n^2, got n={n}, m={m}")
    fixed: list[Edge] = []
    if must_contain is not None:
        if (must_contain.n_x, must_contain.n_y) != (n, n):
            raise InvalidParameterError(f"contained graph must be {n}+{n}")
        fixed = must_contain.edges()
        if len(fixed) > m:
            raise InvalidParameterError(f"contained graph has {len(fixed)} edges, more than m={m}")
    use_symmetry = symmetry and must_contain is None and shuffle_seed is None and m > 0

    fixed_set = set(fixed)
    cells = [(x, y) for x in range(n) for y in range(n) if (x, y) not in fixed_set]
    candidates = _candidate_order(cells, n, shuffle_seed)
    need = m - len(fixed)

    if incumbent_edges is None:
        incumbent_edges = _greedy(n, fixed, candidates, need)
    incumbent_graph = BipartiteGraph.from_edges(n, n, incumbent_edges)
    if incumbent_graph.m != m or not fixed_set <= set(incumbent_edges):
        raise InvalidParameterError("incumbent must have m edges and contain the fixed graph")
    incumbent = count_c4(incumbent_graph)

    lower = _improved_c4_bound(n, m)
    floor = lower if bound_cut else -1

    tasks: list[_Subtree] = []
    if incumbent > floor and need > 0:
        if use_symmetry:
            for d0 in range(max(ceil(m / n), 1), min(n, m) + 1):
                rest = m - d0
                if rest > (n - 1) * d0:
                    continue
                tasks.append(
                    _Subtree(
                        n=n,
                        candidates=tuple(c for c in candidates if c[0] != 0),
                        start=0,
                        need=rest,
                        fixed=tuple((0, y) for y in range(d0)),
                        row_caps=(d0,) * n,
                        incumbent=incumbent,
                        floor=floor,
                        cap=0,
                    )
                )
        else:
            for first in range(len(candidates) - need + 1):
                tasks.append(
                    _Subtree(
                        n=n,
                        candidates=tuple(candidates),
                        start=first + 1,
                        need=need - 1,
                        fixed=(*fixed, candidates[first]),
                        row_caps=(n,) * n,
                        incumbent=incumbent,
                        floor=floor,
                        cap=0,
                    )
                )

    share = max(1, cap // max(len(tasks), 1))
    tasks = [replace(t, cap=share) for t in tasks]
    outcomes = map_tasks(_run_subtree, tasks, threads)

    best, witness = incumbent, sorted(incumbent_edges)
    for outcome in outcomes:
        if outcome.witness is not None and outcome.best < best:
            best, witness = outcome.best, outcome.witness
    nodes = sum(o.nodes for o in outcomes)
    exceeded = any(o.exceeded for o in outcomes)
    status = OracleStatus.INCONCLUSIVE if exceeded else OracleStatus.OPTIMAL

    if count_c4(BipartiteGraph.from_edges(n, n, witness)) != best:
        raise VerificationError("witness C4 count differs from the reported value")
    if status is OracleStatus.OPTIMAL and best < lower:
        raise VerificationError(f"oracle minimum {best} below the improved bound {lower}")

    elapsed_ms = (time.perf_counter() - started) * 1000
    log = logger.warning if exceeded else logger.info
    log(
        "Oracle search finished",
        extra={"n": n, "m": m, "nodes": nodes, "status": status.value, "elapsed_ms": round(elapsed_ms, 1)},
    )
    return OracleResult(
        n=n,
        m=m,
        status=status,
        minimum=best if status is OracleStatus.OPTIMAL else None,
        best_found=best,
        witness_edges=witness,
        nodes=nodes,
        lower_bound=lower,
        fixed_edges=len(fixed),
        symmetry=use_symmetry,
        bound_cut=bound_cut,
        shuffle_seed=shuffle_seed,
        elapsed_ms=elapsed_ms,
    )


def bound_vs_oracle_table(n: int, cap: int = 50_000_000, threads: int = 1) -> list[OracleTableRow]:
    """Oracle minimum against the plain and improved bounds for every m in [0, n^2].

    Raises:
        VerificationError: If a row violates oracle >= improved >= ceil(plain).
    """
    rows: list[OracleTableRow] = []
    for m in range(n * n + 1):
        result = min_c4_exhaustive(n, m, cap=cap, threads=threads)
        plain = plain_lower_bound(n, m, 2, 2) if n >= 2 else Fraction(0)
        improved = _improved_c4_bound(n, m)
        if improved < ceil(plain):
            raise VerificationError(f"m={m}: improved bound {improved} below plain {plain}")
        if result.minimum is not None and result.minimum < improved:
            raise VerificationError(f"m={m}: oracle {result.minimum} below improved bound {improved}")
        rows.append(
            OracleTableRow(
                m=m,
                oracle=result.minimum,
                plain=fraction_str(plain),
                improved=improved,
                gap=None if result.minimum is None else result.minimum - improved,
                status=result.status,
            )
        )
    return rows


def table_csv(rows: list[OracleTableRow]) -> str:
    lines = ["m,oracle,plain,improved,gap,status"]
    for r in rows:
        oracle = "" if r.oracle is None else str(r.oracle)
        gap = "" if r.gap is None else str(r.gap)
        lines.append(f"{r.m},{oracle},{r.plain},{r.improved},{gap},{r.status.value}")
    return "\n".join(lines) + "\n"


def check_plane_supergraph(
    q: int = 2, extra: int = 8, cap: int = 50_000_000, threads: int = 1
) -> SupergraphReport:
    """Minimum C4 over the plane development plus ``extra`` non-incident edges.

    The incumbent adds the completion matching first (edges i -> i - c for a
    completion element c), then greedy edges, and the search stops once it
    meets the improved bound.
    """
    subset = singer_difference_set(q)
    n = subset.n
    base = development(subset)
    non_edges = n * n - base.m
    if not 0 <= extra <= non_edges:
        raise InvalidParameterError(f"extra must lie in [0, {non_edges}], got {extra}")
    m = base.m + extra

    completion = completion_elements(subset)[0]
    matching = [(i, (i - completion) % n) for i in range(n)]
    seeded = sorted(base.edges() + matching[:extra])
    free = [(x, y) for x in range(n) for y in range(n) if not base.has_edge(x, y)]
    incumbent = _greedy(n, seeded, free, max(extra - n, 0))

    result = min_c4_exhaustive(
        n, m, must_contain=base, cap=cap, bound_cut=True, incumbent_edges=incumbent, threads=threads
    )
    bound = result.lower_bound
    base_edges = set(base.edges())
    report = SupergraphReport(
        q=q,
        n=n,
        extra=extra,
        m=m,
        minimum=result.minimum,
        improved_bound=bound,
        gap=None if result.minimum is None else result.minimum - bound,
        status=result.status,
        in_claimed_range=extra > n,
        claim_holds=None if result.minimum is None else result.minimum > bound,
        nodes=result.nodes,
        witness_extra_edges=[e for e in result.witness_edges if e not in base_edges],
    )
    logger.info("Supergraph check finished", extra={"q": q, "m": m, "status": result.status.value})
    return report

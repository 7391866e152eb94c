"""Cayley-style bipartite graphs over abelian groups, h_t, Psi_2 and its minimisation."""

from __future__ import annotations

import logging
from collections.abc import Sequence
from fractions import Fraction
from itertools import combinations
from math import comb

import numpy as np
import numpy.typing as npt

from src.models.bounds import fraction_str
from src.models.errors import (
    BudgetExceededError,
    FormulaUnavailableError,
    InvalidParameterError,
    VerificationError,
)
from src.models.graph import BipartiteGraph
from src.models.group import AbelianGroup, GroupSubsetStats, Psi2SearchResult, Psi2TraceEntry
from src.services.counting import count_c4
from src.services.workers import map_tasks

logger = logging.getLogger(__name__)


def _subset_indices(group: AbelianGroup, subset: Sequence[int]) -> list[int]:
    values = sorted(set(int(a) for a in subset))
    if len(values) != len(subset):
        raise InvalidParameterError("subset elements must be distinct")
    if not values:
        raise InvalidParameterError("subset must be nonempty")
    if values[0] < 0 or values[-1] >= group.order:
        raise InvalidParameterError(f"subset elements must lie in [0, {group.order})")
    return values


def build_cayley_bipartite(group: AbelianGroup, subset: Sequence[int]) -> BipartiteGraph:
    """Elements (X) against blocks A + g (Y): x is adjacent to g iff x - g lies in A."""
    members = _subset_indices(group, subset)
    return BipartiteGraph(np.isin(group.difference_table(), members))


def difference_multiplicities(table: npt.NDArray[np.int64], subset: Sequence[int]) -> npt.NDArray[np.int64]:
    """c(g) for every element index g, with c(0) set to 0."""
    idx = np.asarray(subset, dtype=np.int64)
    counts = np.bincount(table[np.ix_(idx, idx)].ravel(), minlength=table.shape[0])
    counts[0] = 0
    return counts


def _h2(table: npt.NDArray[np.int64], subset: Sequence[int]) -> int:
    counts = difference_multiplicities(table, subset)
    return int((counts * counts).sum())


def h_t(group: AbelianGroup, subset: Sequence[int], t: int) -> int:
    """Sum over nonzero g of c(g)^t, c(g) = #{(a, a') in A^2 : a - a' = g}."""
    if t < 1:
        raise InvalidParameterError(f"t must be at least 1, got {t}")
    counts = difference_multiplicities(group.difference_table(), _subset_indices(group, subset))
    return sum(int(c) ** t for c in counts[1:])


def c4_formula_odd(group: AbelianGroup, subset: Sequence[int]) -> int:
    """C4 count of the Cayley bipartite graph as (n/4)(h_2 - h_1), for odd n.

    Raises:
        FormulaUnavailableError: If the group order is even.
        VerificationError: If n(h_2 - h_1) is not divisible by 4.
    """
    n = group.order
    if n % 2 == 0:
        raise FormulaUnavailableError(f"closed C4 formula needs odd order, got {n}; use the direct count")
    value = n * (h_t(group, subset, 2) - h_t(group, subset, 1))
    if value % 4:
        raise VerificationError(f"n(h2 - h1) = {value} is not divisible by 4")
    return value // 4


def psi2_from_h2(n: int, k: int, h2: int) -> Fraction:
    """Psi_2 = h_2 - h_1^2 / (n - 1) with h_1 = k(k - 1)."""
    if n < 2:
        return Fraction(0)
    return h2 - Fraction((k * (k - 1)) ** 2, n - 1)


def psi2(group: AbelianGroup, subset: Sequence[int]) -> Fraction:
    """Sum over nonzero g of (c(g) - k(k-1)/(n-1))^2, exactly."""
    members = _subset_indices(group, subset)
    n = group.order
    if n < 2:
        return Fraction(0)
    mean = Fraction(len(members) * (len(members) - 1), n - 1)
    counts = difference_multiplicities(group.difference_table(), members)
    return sum(((int(c) - mean) ** 2 for c in counts[1:]), Fraction(0))


def group_subset_stats(group: AbelianGroup, subset: Sequence[int]) -> GroupSubsetStats:
    members = _subset_indices(group, subset)
    n, k = group.order, len(members)
    counts = difference_multiplicities(group.difference_table(), members)
    value = psi2(group, members)
    return GroupSubsetStats(
        orders=list(group.orders),
        subset=members,
        k=k,
        counts={g: int(counts[g]) for g in range(1, n)},
        h1=h_t(group, members, 1),
        h2=h_t(group, members, 2),
        psi2=fraction_str(value),
        mean=fraction_str(Fraction(k * (k - 1), n - 1) if n > 1 else Fraction(0)),
        c4_formula=c4_formula_odd(group, members) if n % 2 else None,
        c4_direct=count_c4(build_cayley_bipartite(group, members)),
        is_difference_set=value == 0,
    )


def _h2_floor(n: int, k: int) -> int:
    """Least conceivable h_2: the k(k-1) differences spread evenly over n - 1 elements."""
    if n < 2:
        return 0
    lo, beta = divmod(k * (k - 1), n - 1)
    return (n - 1 - beta) * lo * lo + beta * (lo + 1) ** 2


def _exhaustive_chunk(task: tuple[tuple[int, ...], int, int]) -> tuple[int, tuple[int, ...]] | None:
    orders, k, first = task
    group = AbelianGroup(orders)
    table = group.difference_table()
    best: tuple[int, tuple[int, ...]] | None = None
    for rest in combinations(range(first + 1, group.order), k - 1):
        candidate = (first, *rest)
        value = _h2(table, candidate)
        if best is None or value < best[0]:
            best = (value, candidate)
    return best


def _local_restart(
    task: tuple[tuple[int, ...], int, np.random.SeedSequence, int],
) -> tuple[int, tuple[int, ...], int]:
    orders, k, seed_seq, budget = task
    group = AbelianGroup(orders)
    table = group.difference_table()
    n = group.order
    floor = _h2_floor(n, k)
    rng = np.random.default_rng(seed_seq)

    current = sorted(int(v) for v in rng.choice(n, size=k, replace=False))
    value = _h2(table, current)
    evaluations = 1
    improved = True
    while improved and evaluations < budget and value > floor:
        improved = False
        outside = [x for x in range(n) if x not in current]
        moves = [(i, x) for i in range(k) for x in outside]
        for move in rng.permutation(len(moves)):
            if evaluations >= budget:
                break
            i, x = moves[int(move)]
            candidate = sorted([*current[:i], *current[i + 1 :], x])
            cand_value = _h2(table, candidate)
            evaluations += 1
            if cand_value < value:
                current, value, improved = candidate, cand_value, True
                break
    return value, tuple(current), evaluations


def psi2_search(
    group: AbelianGroup,
    k: int,
    mode: str = "exhaustive",
    seed: int = 0,
    budget: int = 20_000,
    restarts: int = 8,
    cap: int = 10_000_000,
    threads: int = 1,
) -> Psi2SearchResult:
    """Minimise Psi_2 over k-subsets; equivalently minimise h_2, since h_1 is fixed.

    Args:
        group: The abelian group.
        k: Subset size, 1 <= k <= n.
        mode: ``"exhaustive"`` for the true minimum with the lexicographically
            least witness, ``"local"`` for seeded first-improvement swaps.
        seed: Root seed for local search restarts.
        budget: Total h_2 evaluations for local search, split over restarts.
        restarts: Number of independent local search restarts.
        cap: Largest C(n, k) the exhaustive mode will enumerate.
        threads: Worker processes; the result does not depend on it.

    Raises:
        BudgetExceededError: If exhaustive mode would exceed ``cap``.
    """
    n = group.order
    if not 1 <= k <= n:
        raise InvalidParameterError(f"k must lie in [1, {n}], got {k}")

    if mode == "exhaustive":
        total = comb(n, k)
        if total > cap:
            logger.warning("Exhaustive Psi_2 search over cap", extra={"n": n, "k": k, "nodes": total})
            raise BudgetExceededError(total, cap)
        tasks = [(group.orders, k, first) for first in range(n - k + 1)]
        chunks = [c for c in map_tasks(_exhaustive_chunk, tasks, threads) if c is not None]
        best_h2, best = min(chunks)
        result = Psi2SearchResult(
            orders=list(group.orders),
            k=k,
            mode=mode,
            best_subset=list(best),
            h2=best_h2,
            psi2=fraction_str(psi2_from_h2(n, k, best_h2)),
            evaluations=total,
            exact=True,
        )
    elif mode == "local":
        if restarts < 1 or budget < 1:
            raise InvalidParameterError("restarts and budget must be positive")
        per_restart = max(1, budget // restarts)
        children = np.random.SeedSequence(seed).spawn(restarts)
        tasks = [(group.orders, k, child, per_restart) for child in children]
        outcomes = map_tasks(_local_restart, tasks, threads)
        trace = [
            Psi2TraceEntry(restart=i, evaluations=ev, h2=val, subset=list(sub))
            for i, (val, sub, ev) in enumerate(outcomes)
        ]
        best_h2, best, _ = min(outcomes, key=lambda o: (o[0], o[1]))
        result = Psi2SearchResult(
            orders=list(group.orders),
            k=k,
            mode=mode,
            best_subset=list(best),
            h2=best_h2,
            psi2=fraction_str(psi2_from_h2(n, k, best_h2)),
            evaluations=sum(ev for _, _, ev in outcomes),
            exact=False,
            seed=seed,
            trace=trace,
        )
    else:
        raise InvalidParameterError(f"unknown search mode {mode!r}")

    logger.info("Psi_2 search finished", extra={"n": n, "k": k, "status": mode})
    return result

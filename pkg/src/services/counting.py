"""Exact codegree, C4, K_{2,t} and K_{a,b} counts on bipartite graphs."""

from __future__ import annotations

import logging
from functools import reduce
from itertools import combinations
from math import comb
from operator import and_

import numpy as np

from src.models.errors import InvalidParameterError
from src.models.graph import BipartiteGraph, Side

logger = logging.getLogger(__name__)


def codegree_histogram(graph: BipartiteGraph, side: Side = Side.X) -> dict[int, int]:
    """Map codegree -> number of unordered pairs of ``side`` with that codegree."""
    n = graph.size(side)
    if n < 2:
        return {}
    packed = graph.packed_rows(side)
    counts = np.zeros(packed.shape[1] * 8 + 1, dtype=np.int64)
    for u in range(n - 1):
        row = np.bitwise_count(packed[u] & packed[u + 1 :]).sum(axis=1, dtype=np.int64)
        counts += np.bincount(row, minlength=counts.size)
    return {int(c): int(cnt) for c, cnt in enumerate(counts) if cnt}


def count_k2t(graph: BipartiteGraph, t: int, side: Side = Side.X) -> int:
    """Unordered K_{2,t} copies whose 2-side lies in ``side``.

    Raises:
        InvalidParameterError: If ``t < 2``.
    """
    if t < 2:
        raise InvalidParameterError(f"t must be at least 2, got {t}")
    return sum(cnt * comb(c, t) for c, cnt in codegree_histogram(graph, side).items())


def count_c4(graph: BipartiteGraph) -> int:
    """Number of 4-cycles: sum over X-pairs of C(codegree, 2)."""
    return count_k2t(graph, 2, Side.X)


def count_kab(graph: BipartiteGraph, a: int, b: int, side: Side = Side.X) -> int:
    """K_{a,b} copies with the a-side in ``side``, by intersecting a bit-rows per subset.

    Returns 0 when a or b exceeds the class sizes.
    """
    if a < 1 or b < 1:
        raise InvalidParameterError("a and b must be positive")
    if a > graph.size(side) or b > graph.size(Side.Y if side is Side.X else Side.X):
        return 0
    rows = graph.bit_rows(side)
    total = 0
    for subset in combinations(rows, a):
        total += comb(reduce(and_, subset).bit_count(), b)
    return total


def degree_binomial_sum(graph: BipartiteGraph, a: int, side: Side = Side.Y) -> int:
    """Sum over vertices of ``side`` of C(degree, a).

    For a = 2 this double-counts the codegrees of the opposite class.
    """
    return sum(comb(d, a) for d in graph.degrees(side))

"""Shared fixtures: fixture file paths and an independent reference for the improved C4 bound."""

from __future__ import annotations

import heapq
from collections.abc import Callable
from math import comb
from pathlib import Path

import pytest

FIXTURES = Path(__file__).parent / "fixtures"


def _greedy_pair_sum(total: int, slots: int) -> int:
    """Least sum of C(x_i, 2) over ``slots`` nonnegative integers summing to ``total``.

    Adds one unit at a time to the slot with the smallest marginal cost.
    """
    heap = [0] * slots
    for _ in range(total):
        smallest = heapq.heappop(heap)
        heapq.heappush(heap, smallest + 1)
    return sum(comb(x, 2) for x in heap)


def reference_improved_c4(n: int, m: int) -> int:
    """Improved C4 bound recomputed without the production code path."""
    codegree_total = _greedy_pair_sum(m, n)
    return _greedy_pair_sum(codegree_total, comb(n, 2))


@pytest.fixture
def reference_bound() -> Callable[[int, int], int]:
    return reference_improved_c4


@pytest.fixture
def heawood_path() -> Path:
    return FIXTURES / "heawood.graph"


@pytest.fixture
def fano_set_path() -> Path:
    return FIXTURES / "fano.set"


@pytest.fixture
def malformed_graph_path() -> Path:
    return FIXTURES / "malformed.graph"

"""Unit tests for the search node budget and the task fan-out."""

from __future__ import annotations

import logging

import pytest

from src.models.errors import BudgetExceededError
from src.services.budget import NodeBudget
from src.services.workers import map_tasks


def _square(x: int) -> int:
    return x * x


class TestNodeBudget:
    """Node accounting for the exhaustive searches."""

    def test_spend_within_cap(self) -> None:
        budget = NodeBudget(5)
        budget.spend()
        budget.spend(3)
        assert budget.nodes == 4
        assert budget.remaining == 1

    def test_cap_reached_exactly(self) -> None:
        budget = NodeBudget(2)
        budget.spend(2)
        assert budget.remaining == 0

    def test_exceeding_raises(self, caplog: pytest.LogCaptureFixture) -> None:
        """Overspending raises and logs a warning with the cap."""
        budget = NodeBudget(2)
        budget.spend(2)
        with caplog.at_level(logging.WARNING), pytest.raises(BudgetExceededError) as exc_info:
            budget.spend()
        assert exc_info.value.nodes == 3
        assert exc_info.value.cap == 2
        assert exc_info.value.exit_code == 3
        assert "Search budget exceeded" in caplog.text

    @pytest.mark.parametrize("cap", [0, -1])
    def test_non_positive_cap(self, cap: int) -> None:
        with pytest.raises(ValueError):
            NodeBudget(cap)


class TestMapTasks:
    """Serial and pooled task fan-out."""

    def test_serial(self) -> None:
        assert map_tasks(_square, [3, 1, 2]) == [9, 1, 4]

    def test_empty(self) -> None:
        assert map_tasks(_square, [], threads=4) == []

    def test_pool_keeps_order(self) -> None:
        """Results come back in submission order whatever the worker count."""
        tasks = list(range(20))
        assert map_tasks(_square, tasks, threads=3) == [t * t for t in tasks]

"""Node budget for exhaustive searches.

Counts explored search nodes and raises once a configured cap is passed.
"""

from __future__ import annotations

import logging

from src.models.errors import BudgetExceededError

logger = logging.getLogger(__name__)


class NodeBudget:
    """Counter of explored nodes with a hard cap.

    Args:
        cap: Maximum number of nodes that may be explored.
    """

    def __init__(self, cap: int) -> None:
        if cap < 1:
            raise ValueError("cap must be positive")
        self.cap = cap
        self.nodes = 0

    @property
    def remaining(self) -> int:
        return max(self.cap - self.nodes, 0)

    def spend(self, count: int = 1) -> None:
        """Record ``count`` explored nodes.

        Raises:
            BudgetExceededError: When the running total passes the cap.
        """
        self.nodes += count
        if self.nodes > self.cap:
            logger.warning(
                "Search budget exceeded",
                extra={"nodes": self.nodes, "status": "inconclusive"},
            )
            raise BudgetExceededError(self.nodes, self.cap)

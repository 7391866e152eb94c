"""Integration tests: every acceptance criterion passes end to end."""

from __future__ import annotations

import pytest

from src.services.acceptance import CRITERIA, run_acceptance

FAST = ["singer", "completion", "geometry", "mors", "bounds", "equality"]
SLOW = ["group", "oracle", "determinism"]


class TestAcceptanceCriteria:
    """Each acceptance criterion, run through the suite."""

    @pytest.mark.parametrize("criterion", FAST)
    def test_fast_criterion(self, criterion: str) -> None:
        report = run_acceptance(criterion)
        assert [c.id for c in report.criteria] == [criterion]
        result = report.criteria[0]
        assert result.failures == []
        assert result.checks > 0
        assert report.passed

    @pytest.mark.slow
    @pytest.mark.parametrize("criterion", SLOW)
    def test_slow_criterion(self, criterion: str) -> None:
        """Criteria that run the oracle or the full group searches."""
        report = run_acceptance(criterion, threads=2)
        assert report.criteria[0].failures == []

    def test_every_criterion_is_covered(self) -> None:
        """No criterion is left out of both lists."""
        assert set(CRITERIA) == set(FAST) | set(SLOW)


class TestAcceptanceReport:
    """Filtering and serialising the pass/fail matrix."""

    def test_filter_matches_substring(self) -> None:
        report = run_acceptance("ing")
        assert report.matrix() == {"singer": True}

    def test_unknown_filter_is_empty_pass(self) -> None:
        report = run_acceptance("nothing-matches")
        assert report.criteria == []
        assert report.passed

    def test_serialises_pass_alias(self) -> None:
        data = run_acceptance("singer").model_dump(by_alias=True)
        assert data["pass"] is True
        assert data["criteria"][0]["pass"] is True

"""Unit tests for the finite-field graph G^(q,k) and its closed forms."""

from __future__ import annotations

import logging

import pytest
from pydantic import ValidationError

from src.models.errors import InvalidParameterError, NotPrimePowerError
from src.models.graph import Side
from src.models.mors import MorsParams
from src.services.counting import codegree_histogram, count_c4, count_k2t
from src.services.mors import build_mors, predicted_histogram, predicted_stats, verify_mors


class TestParams:
    """Validation of q, k, delta and the primitive root."""

    def test_q_lower_bound(self) -> None:
        with pytest.raises(ValidationError):
            MorsParams(q=1, k=1)

    def test_k_must_divide(self) -> None:
        with pytest.raises(InvalidParameterError, match="does not divide"):
            build_mors(MorsParams(q=5, k=3))

    def test_not_prime_power(self) -> None:
        with pytest.raises(NotPrimePowerError):
            build_mors(MorsParams(q=6, k=5))

    def test_root_must_be_primitive(self) -> None:
        with pytest.raises(InvalidParameterError, match="primitive"):
            build_mors(MorsParams(q=7, k=3, root_index=2))

    def test_root_out_of_range(self) -> None:
        with pytest.raises(InvalidParameterError):
            build_mors(MorsParams(q=7, k=3, root_index=7))


class TestBuild:
    """Adjacency of G^(q,k)."""

    def test_q5_k2(self) -> None:
        graph = build_mors(MorsParams(q=5, k=2))
        assert (graph.n_x, graph.n_y, graph.m) == (10, 10, 40)
        assert graph.is_regular() == 4
        assert codegree_histogram(graph, Side.X) == {0: 5, 1: 20, 2: 20}
        assert codegree_histogram(graph, Side.Y) == {0: 5, 1: 20, 2: 20}
        assert count_c4(graph) == 20

    def test_q7_k3(self) -> None:
        graph = build_mors(MorsParams(q=7, k=3))
        assert graph.m == 84
        assert codegree_histogram(graph) == {0: 7, 2: 42, 3: 42}
        assert count_c4(graph) == 168
        assert count_k2t(graph, 3, Side.X) == 42
        assert count_k2t(graph, 4, Side.X) == 0

    def test_full_subgroup_is_complete_minus_matching(self) -> None:
        """k = q - 1 leaves out only one perfect matching."""
        graph = build_mors(MorsParams(q=5, k=4))
        assert graph.m == 20
        assert codegree_histogram(graph) == {3: 10}

    def test_labels(self) -> None:
        graph = build_mors(MorsParams(q=5, k=2))
        assert graph.labels_x is not None
        assert graph.labels_x[0] == (0, 1)
        assert graph.labels_x[3] == (1, 2)
        assert graph.codegree(0, 2) == 1  # same block, k - 1

    @pytest.mark.parametrize("delta", [0, 1, 2])
    def test_coset_shift_keeps_statistics(self, delta: int) -> None:
        graph = build_mors(MorsParams(q=7, k=3, delta=delta))
        assert codegree_histogram(graph) == {0: 7, 2: 42, 3: 42}

    def test_logs_construction(self, caplog: pytest.LogCaptureFixture) -> None:
        with caplog.at_level(logging.INFO, logger="src.services.mors"):
            build_mors(MorsParams(q=5, k=2))
        assert "Built G^(q,k)" in caplog.text


class TestPredictions:
    """Closed-form codegree histograms and counts."""

    def test_histograms(self) -> None:
        assert predicted_histogram(5, 2) == {0: 5, 1: 20, 2: 20}
        assert predicted_histogram(7, 3) == {0: 7, 2: 42, 3: 42}
        assert predicted_histogram(5, 4) == {3: 10}

    def test_k_one_merges_zero_codegrees(self) -> None:
        """With k = 1 the graph is C4-free and the ratio is undefined."""
        assert predicted_histogram(5, 1) == {0: 70, 1: 120}
        stats = predicted_stats(5, 1)
        assert stats.c4 == 0
        assert stats.ratio is None

    def test_q13_k4(self) -> None:
        stats = predicted_stats(13, 4)
        assert (stats.n, stats.m, stats.degree, stats.blocks) == (39, 468, 12, 3)
        assert stats.c4 == 3510
        assert stats.c4_over_n2 == "30/13"
        assert stats.limit == "3"
        assert stats.ratio == "10/13"
        assert stats.zero_partners == 2

    def test_uniform_forms_are_reported_separately(self) -> None:
        assert predicted_stats(5, 2).c4_if_uniform == 40
        stats = predicted_stats(7, 3)
        assert stats.c4_if_uniform == 252
        assert stats.c4 == 168
        assert stats.k2t_unordered == 42
        assert stats.k2t_ordered == 84


class TestVerify:
    """Predictions checked against direct counts."""

    @pytest.mark.parametrize(("q", "k", "delta"), [(5, 2, 0), (7, 3, 1), (9, 2, 0), (13, 4, 1), (8, 7, 0)])
    def test_passes(self, q: int, k: int, delta: int) -> None:
        report = verify_mors(MorsParams(q=q, k=k, delta=delta))
        assert report.passed, report.counterexample
        assert report.counterexample is None
        assert all(check.passed for check in report.checks)

    def test_other_primitive_root(self) -> None:
        report = verify_mors(MorsParams(q=7, k=3, root_index=5))
        assert report.passed
        assert report.root_index == 5

    def test_report_fields(self) -> None:
        report = verify_mors(MorsParams(q=7, k=3))
        assert report.c4 == 168
        assert report.k2t_unordered == {2: 168, 3: 42, 4: 0}
        assert report.k2t_unordered_v2 == report.k2t_unordered
        assert {c.name for c in report.checks} >= {"edges", "regular", "codegrees_v1", "c4", "k23"}
        dumped = report.model_dump(mode="json", by_alias=True)
        assert dumped["pass"] is True

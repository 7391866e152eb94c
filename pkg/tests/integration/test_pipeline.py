"""Integration tests across construction, file formats, counting and bounds."""

from __future__ import annotations

from pathlib import Path

from src.models.group import AbelianGroup
from src.models.mors import MorsParams
from src.services.bounds import equality_conditions, improved_lower_bound
from src.services.counting import codegree_histogram, count_c4
from src.services.difference_sets import completion_elements, development, singer_difference_set
from src.services.graph_io import load_difference_set, load_graph, save_difference_set, save_graph
from src.services.groups import build_cayley_bipartite, c4_formula_odd
from src.services.mors import build_mors, predicted_stats


class TestPlaneThroughFiles:
    """A Singer set written to disk and rebuilt into its completed graph."""

    def test_singer_set_to_completed_graph(self, tmp_path: Path) -> None:
        set_path = tmp_path / "d.set"
        save_difference_set(singer_difference_set(3), set_path)
        subset = load_difference_set(set_path, 13)

        completed = subset.with_element(completion_elements(subset)[0])
        graph_path = tmp_path / "g.graph"
        save_graph(development(completed), graph_path)
        graph = load_graph(graph_path)

        assert graph.m == 13 * 5
        assert count_c4(graph) == improved_lower_bound(13, graph.m, 2, 2)
        assert equality_conditions(graph, improved=True).passed


class TestMorsThroughFiles:
    """G^(q,k) saved, reloaded and recounted."""

    def test_saved_graph_matches_prediction(self, tmp_path: Path) -> None:
        """Counts on the reloaded graph match the closed forms."""
        path = tmp_path / "mors.graph"
        save_graph(build_mors(MorsParams(q=13, k=4)), path)
        graph = load_graph(path)
        pred = predicted_stats(13, 4)
        assert (graph.n_x, graph.m) == (pred.n, pred.m)
        assert codegree_histogram(graph) == pred.codegree_histogram
        assert count_c4(graph) == pred.c4 == 3510


class TestCayleyAgreesWithDevelopment:
    """Cayley graph of Z_n against the development of the same set."""

    def test_same_c4_count(self) -> None:
        subset = singer_difference_set(4)
        group = AbelianGroup([subset.n])
        cayley = build_cayley_bipartite(group, list(subset.elements))
        assert count_c4(cayley) == count_c4(development(subset)) == 0
        assert c4_formula_odd(group, list(subset.elements)) == 0

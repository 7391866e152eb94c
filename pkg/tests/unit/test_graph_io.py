"""Unit tests for the graph and difference-set file formats."""

from __future__ import annotations

from pathlib import Path

import pytest

from src.models.difference import CyclicSubset
from src.models.errors import ErrorCode, InvalidParameterError, MalformedFileError
from src.models.graph import BipartiteGraph
from src.services.graph_io import (
    format_graph,
    load_difference_set,
    load_graph,
    parse_difference_set,
    parse_graph,
    save_difference_set,
    save_graph,
)


class TestGraphFormat:
    """Edge-list graph files."""

    def test_format(self) -> None:
        """Edges are written sorted under the header line."""
        graph = BipartiteGraph.from_edges(2, 3, [(1, 2), (0, 0)])
        assert format_graph(graph) == "2 3 2\n0 0\n1 2\n"

    def test_parse_skips_comments_and_blank_lines(self) -> None:
        graph = parse_graph("# header next\n\n2 2 2\n0 1\n# middle\n1 0\n")
        assert graph.edges() == [(0, 1), (1, 0)]

    def test_save_and_load(self, tmp_path: Path) -> None:
        graph = BipartiteGraph.from_edges(3, 2, [(0, 1), (2, 0), (1, 1)])
        path = tmp_path / "g.graph"
        save_graph(graph, path)
        assert load_graph(path) == graph

    def test_heawood_fixture(self, heawood_path: Path) -> None:
        graph = load_graph(heawood_path)
        assert (graph.n_x, graph.n_y, graph.m) == (7, 7, 21)
        assert graph.is_regular() == 3


class TestGraphErrors:
    """Malformed and unreadable or unwritable graph files."""

    @pytest.mark.parametrize(
        ("text", "line", "fragment"),
        [
            ("3 3\n", 1, "header"),
            ("2 2 5\n", 1, "inconsistent header"),
            ("2 2 1\n0 a\n", 2, "non-integer"),
            ("2 2 1\n5 0\n", 2, "out of range"),
            ("2 2 1\n0 0\n1 1\n", 3, "more than 1 edges"),
            ("# c\n2 2 2\n0 0\n", 2, "declares 2 edges, found 1"),
            ("# only a comment\n", 1, "missing header"),
        ],
    )
    def test_reports_line(self, text: str, line: int, fragment: str) -> None:
        """Each parse error names the offending line."""
        with pytest.raises(MalformedFileError) as exc_info:
            parse_graph(text)
        assert exc_info.value.line == line
        assert fragment in exc_info.value.message
        assert f"(line {line})" in exc_info.value.message

    def test_malformed_fixture(self, malformed_graph_path: Path) -> None:
        with pytest.raises(MalformedFileError) as exc_info:
            load_graph(malformed_graph_path)
        assert exc_info.value.line == 4
        response = exc_info.value.to_response()
        assert response.error is ErrorCode.MALFORMED_FILE
        assert response.line == 4

    def test_missing_file(self, tmp_path: Path) -> None:
        with pytest.raises(MalformedFileError, match="cannot read"):
            load_graph(tmp_path / "absent.graph")

    def test_unwritable_path(self, tmp_path: Path) -> None:
        """Saving into a missing directory raises a domain error, not OSError."""
        target = tmp_path / "missing_dir" / "g.graph"
        with pytest.raises(InvalidParameterError, match="cannot write") as exc_info:
            save_graph(BipartiteGraph.complete(2, 2), target)
        assert exc_info.value.to_response().error is ErrorCode.INVALID_PARAMETER
        assert not target.exists()


class TestDifferenceSetFormat:
    """One-line residue files."""

    def test_parse(self) -> None:
        subset = parse_difference_set("# planar\n9, 0,3,1\n", 13)
        assert subset.elements == (0, 1, 3, 9)

    def test_fano_fixture(self, fano_set_path: Path) -> None:
        assert load_difference_set(fano_set_path, 7).elements == (1, 2, 4)

    def test_save_and_load(self, tmp_path: Path) -> None:
        path = tmp_path / "d.set"
        save_difference_set(CyclicSubset.of(13, [0, 1, 3, 9]), path)
        assert path.read_text(encoding="utf-8") == "0,1,3,9\n"
        assert load_difference_set(path, 13).elements == (0, 1, 3, 9)

    def test_save_into_missing_directory(self, tmp_path: Path) -> None:
        with pytest.raises(InvalidParameterError, match="cannot write"):
            save_difference_set(CyclicSubset.of(7, [1, 2, 4]), tmp_path / "nope" / "d.set")

    @pytest.mark.parametrize(
        ("text", "line"),
        [
            ("1,2\n3,4\n", 2),
            ("# c\n1,x\n", 2),
            ("1,1,2\n", 1),
            ("1,7\n", 1),
            ("", 1),
        ],
    )
    def test_errors(self, text: str, line: int) -> None:
        """Malformed residue lines are rejected at the right line."""
        with pytest.raises(MalformedFileError) as exc_info:
            parse_difference_set(text, 7)
        assert exc_info.value.line == line

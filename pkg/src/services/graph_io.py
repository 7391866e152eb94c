"""Text formats for graphs and difference sets.

Graph files: a header line ``n_X n_Y m`` followed by m lines ``x y`` with
0-based indices, sorted on save. Lines starting with ``#`` are comments.
Difference-set files: one line of comma-separated residues.
"""

from __future__ import annotations

import logging
from pathlib import Path

import numpy as np
import numpy.typing as npt

from src.models.difference import CyclicSubset
from src.models.errors import InvalidParameterError, MalformedFileError
from src.models.graph import BipartiteGraph

logger = logging.getLogger(__name__)


def format_graph(graph: BipartiteGraph) -> str:
    lines = [f"{graph.n_x} {graph.n_y} {graph.m}"]
    lines.extend(f"{x} {y}" for x, y in graph.edges())
    return "\n".join(lines) + "\n"


def _ints(text: str, count: int, lineno: int, what: str) -> list[int]:
    fields = text.split()
    if len(fields) != count:
        raise MalformedFileError(f"expected {what}", line=lineno)
    try:
        return [int(f) for f in fields]
    except ValueError:
        raise MalformedFileError(f"non-integer value in {what}", line=lineno) from None


def parse_graph(text: str) -> BipartiteGraph:
    """Parse the graph text format.

    Raises:
        MalformedFileError: With the offending line number on any syntax,
            range, duplicate-edge or edge-count error.
    """
    header: tuple[int, int, int, int] | None = None
    adj: npt.NDArray[np.bool_] | None = None
    seen = 0
    last_line = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        last_line = lineno
        if header is None:
            n_x, n_y, m = _ints(line, 3, lineno, "header 'n_X n_Y m'")
            if n_x < 0 or n_y < 0 or not 0 <= m <= n_x * n_y:
                raise MalformedFileError("inconsistent header", line=lineno)
            header = (n_x, n_y, m, lineno)
            adj = np.zeros((n_x, n_y), dtype=np.bool_)
            continue
        assert adj is not None
        x, y = _ints(line, 2, lineno, "edge 'x y'")
        if not (0 <= x < header[0] and 0 <= y < header[1]):
            raise MalformedFileError(f"edge ({x}, {y}) out of range", line=lineno)
        if adj[x, y]:
            raise MalformedFileError(f"duplicate edge ({x}, {y})", line=lineno)
        adj[x, y] = True
        seen += 1
        if seen > header[2]:
            raise MalformedFileError(f"more than {header[2]} edges", line=lineno)

    if header is None or adj is None:
        raise MalformedFileError("missing header", line=last_line or 1)
    if seen != header[2]:
        raise MalformedFileError(
            f"header declares {header[2]} edges, found {seen}", line=header[3]
        )
    return BipartiteGraph(adj)


def _write(path: Path, text: str) -> None:
    try:
        path.write_text(text, encoding="utf-8")
    except OSError as exc:
        raise InvalidParameterError(f"cannot write {path}: {exc.strerror}") from exc


def save_graph(graph: BipartiteGraph, path: Path) -> None:
    """Write ``graph`` in edge-list format.

    Raises:
        InvalidParameterError: If the file cannot be written.
    """
    _write(path, format_graph(graph))
    logger.info("Saved graph", extra={"n": graph.n_x, "m": graph.m})


def load_graph(path: Path) -> BipartiteGraph:
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise MalformedFileError(f"cannot read {path}: {exc.strerror}") from exc
    return parse_graph(text)


def format_difference_set(subset: CyclicSubset) -> str:
    return subset.to_line() + "\n"


def parse_difference_set(text: str, n: int) -> CyclicSubset:
    """Parse a comma-separated residue line into a subset of Z_n.

    Raises:
        MalformedFileError: If the content is not one line of integers or
            the residues are not distinct elements of [0, n).
    """
    lines = [(i, ln.strip()) for i, ln in enumerate(text.splitlines(), start=1)]
    lines = [(i, ln) for i, ln in lines if ln and not ln.startswith("#")]
    if len(lines) != 1:
        raise MalformedFileError("expected exactly one line of residues", line=lines[1][0] if len(lines) > 1 else 1)
    lineno, line = lines[0]
    try:
        return CyclicSubset.from_line(line, n)
    except (InvalidParameterError, ValueError) as exc:
        raise MalformedFileError(str(exc), line=lineno) from None


def save_difference_set(subset: CyclicSubset, path: Path) -> None:
    _write(path, format_difference_set(subset))


def load_difference_set(path: Path, n: int) -> CyclicSubset:
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise MalformedFileError(f"cannot read {path}: {exc.strerror}") from exc
    return parse_difference_set(text, n)

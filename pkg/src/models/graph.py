"""Bipartite graph container backed by a dense boolean adjacency matrix."""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from enum import Enum
from typing import Any

import numpy as np
import numpy.typing as npt

from src.models.errors import InvalidParameterError

BoolMatrix = npt.NDArray[np.bool_]
Label = tuple[int, ...]


class Side(str, Enum):
    """Vertex class of a bipartite graph. X holds rows, Y holds columns."""

    X = "X"
    Y = "Y"

    @classmethod
    def parse(cls, value: str) -> Side:
        """Accept X/Y as well as the V1/V2 names used for the finite-field graphs."""
        key = value.strip().upper()
        aliases = {"X": cls.X, "V1": cls.X, "Y": cls.Y, "V2": cls.Y}
        if key not in aliases:
            raise InvalidParameterError(f"unknown side {value!r}; expected X, Y, V1 or V2")
        return aliases[key]


class BipartiteGraph:
    """Immutable bipartite graph G between classes X (rows) and Y (columns).

    Adding edges returns a new graph, so counts computed on a graph stay
    valid for that object.

    Args:
        adjacency: n_X by n_Y boolean matrix; row x, column y is the edge xy.
        labels_x: Optional per-vertex labels for X, e.g. (a, b) pairs.
        labels_y: Optional per-vertex labels for Y.
    """

    __slots__ = ("_adj", "labels_x", "labels_y")

    def __init__(
        self,
        adjacency: npt.ArrayLike,
        labels_x: Sequence[Label] | None = None,
        labels_y: Sequence[Label] | None = None,
    ) -> None:
        adj = np.array(adjacency, dtype=np.bool_)
        if adj.ndim != 2:
            raise InvalidParameterError("adjacency must be a 2-dimensional matrix")
        adj.setflags(write=False)
        self._adj: BoolMatrix = adj
        if labels_x is not None and len(labels_x) != adj.shape[0]:
            raise InvalidParameterError("labels_x length differs from n_X")
        if labels_y is not None and len(labels_y) != adj.shape[1]:
            raise InvalidParameterError("labels_y length differs from n_Y")
        self.labels_x: tuple[Label, ...] | None = tuple(labels_x) if labels_x is not None else None
        self.labels_y: tuple[Label, ...] | None = tuple(labels_y) if labels_y is not None else None

    @classmethod
    def from_edges(cls, n_x: int, n_y: int, edges: Iterable[tuple[int, int]]) -> BipartiteGraph:
        if n_x < 0 or n_y < 0:
            raise InvalidParameterError("class sizes must be non-negative")
        adj = np.zeros((n_x, n_y), dtype=np.bool_)
        for x, y in edges:
            if not (0 <= x < n_x and 0 <= y < n_y):
                raise InvalidParameterError(f"edge ({x}, {y}) outside {n_x}+{n_y}")
            adj[x, y] = True
        return cls(adj)

    @classmethod
    def empty(cls, n_x: int, n_y: int) -> BipartiteGraph:
        return cls(np.zeros((n_x, n_y), dtype=np.bool_))

    @classmethod
    def complete(cls, n_x: int, n_y: int) -> BipartiteGraph:
        return cls(np.ones((n_x, n_y), dtype=np.bool_))

    @property
    def adjacency(self) -> BoolMatrix:
        """Read-only adjacency matrix."""
        return self._adj

    @property
    def n_x(self) -> int:
        return int(self._adj.shape[0])

    @property
    def n_y(self) -> int:
        return int(self._adj.shape[1])

    @property
    def m(self) -> int:
        return int(np.count_nonzero(self._adj))

    def size(self, side: Side) -> int:
        return self.n_x if side is Side.X else self.n_y

    def edges(self) -> list[tuple[int, int]]:
        """Edges as (x, y) pairs in lexicographic order."""
        return [(int(x), int(y)) for x, y in np.argwhere(self._adj)]

    def has_edge(self, x: int, y: int) -> bool:
        return bool(self._adj[x, y])

    def with_edges(self, edges: Iterable[tuple[int, int]]) -> BipartiteGraph:
        """Return a new graph with ``edges`` added; labels are kept."""
        adj = self._adj.copy()
        for x, y in edges:
            if not (0 <= x < self.n_x and 0 <= y < self.n_y):
                raise InvalidParameterError(f"edge ({x}, {y}) outside {self.n_x}+{self.n_y}")
            adj[x, y] = True
        return BipartiteGraph(adj, self.labels_x, self.labels_y)

    def transpose(self) -> BipartiteGraph:
        return BipartiteGraph(self._adj.T, self.labels_y, self.labels_x)

    def side_matrix(self, side: Side) -> BoolMatrix:
        """Rows are the vertices of ``side``, columns their possible neighbours."""
        return self._adj if side is Side.X else self._adj.T

    def degrees(self, side: Side = Side.X) -> list[int]:
        return [int(d) for d in self.side_matrix(side).sum(axis=1)]

    def bit_rows(self, side: Side = Side.X) -> list[int]:
        """Neighbourhoods as Python integers: bit j set iff adjacent to vertex j."""
        rows: list[int] = []
        for row in self.side_matrix(side):
            rows.append(sum(1 << int(j) for j in np.flatnonzero(row)))
        return rows

    def packed_rows(self, side: Side = Side.X) -> npt.NDArray[np.uint8]:
        return np.packbits(self.side_matrix(side), axis=1)

    def codegree(self, u: int, v: int, side: Side = Side.X) -> int:
        """Number of common neighbours of two distinct vertices of ``side``."""
        n = self.size(side)
        if not (0 <= u < n and 0 <= v < n):
            raise InvalidParameterError(f"vertices ({u}, {v}) outside side {side.value} of size {n}")
        if u == v:
            raise InvalidParameterError("codegree needs two distinct vertices")
        packed = self.packed_rows(side)
        return int(np.bitwise_count(packed[u] & packed[v]).sum())

    def codegree_matrix(self, side: Side = Side.X) -> npt.NDArray[np.int64]:
        """All pairwise codegrees of ``side``; the diagonal holds the degrees."""
        packed = self.packed_rows(side)
        codeg = np.empty((packed.shape[0], packed.shape[0]), dtype=np.int64)
        for u in range(packed.shape[0]):
            codeg[u] = np.bitwise_count(packed[u] & packed).sum(axis=1, dtype=np.int64)
        return codeg

    def is_regular(self) -> int | None:
        """Common degree when every vertex of both classes has it, else None."""
        degrees = set(self.degrees(Side.X)) | set(self.degrees(Side.Y))
        if len(degrees) == 1:
            return degrees.pop()
        return None

    def to_dict(self) -> dict[str, Any]:
        return {"n_x": self.n_x, "n_y": self.n_y, "m": self.m}

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BipartiteGraph):
            return NotImplemented
        return self._adj.shape == other._adj.shape and bool(np.array_equal(self._adj, other._adj))

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"BipartiteGraph(n_x={self.n_x}, n_y={self.n_y}, m={self.m})"

"""Finite abelian groups as products of cyclic factors, and subset statistics."""

from __future__ import annotations

from collections.abc import Sequence
from functools import cached_property
from math import prod

import numpy as np
import numpy.typing as npt
from pydantic import BaseModel, Field

from src.models.errors import InvalidParameterError


class AbelianGroup:
    """Z_{n_1} x ... x Z_{n_r} with elements numbered in mixed radix.

    Element index i corresponds to the coordinate tuple
    ``np.unravel_index(i, orders)``; for a cyclic group the index is the residue.
    """

    def __init__(self, orders: Sequence[int]) -> None:
        if not orders or any(o < 1 for o in orders):
            raise InvalidParameterError(f"cyclic factor orders must be positive, got {list(orders)}")
        self.orders: tuple[int, ...] = tuple(int(o) for o in orders)
        self.order = prod(self.orders)

    @cached_property
    def _coords(self) -> npt.NDArray[np.int64]:
        return np.stack(np.unravel_index(np.arange(self.order), self.orders), axis=1).astype(np.int64)

    def element(self, index: int) -> tuple[int, ...]:
        return tuple(int(c) for c in self._coords[index])

    def index(self, coords: Sequence[int]) -> int:
        if len(coords) != len(self.orders):
            raise InvalidParameterError(f"element {tuple(coords)} has the wrong number of coordinates")
        return int(np.ravel_multi_index(tuple(c % o for c, o in zip(coords, self.orders, strict=True)), self.orders))

    def parse_element(self, token: str) -> int:
        """Index of an element written as an index ('7') or as coordinates ('1:2')."""
        token = token.strip()
        try:
            if ":" in token:
                return self.index([int(part) for part in token.split(":")])
            value = int(token)
        except ValueError:
            raise InvalidParameterError(f"cannot parse group element {token!r}") from None
        if not 0 <= value < self.order:
            raise InvalidParameterError(f"element {value} outside group of order {self.order}")
        return value

    def difference_table(self) -> npt.NDArray[np.int64]:
        """D[i, j] = index of element_i - element_j."""
        return self._difference_table

    @cached_property
    def _difference_table(self) -> npt.NDArray[np.int64]:
        coords = self._coords
        diff = (coords[:, None, :] - coords[None, :, :]) % np.array(self.orders)
        table = np.ravel_multi_index(tuple(np.moveaxis(diff, -1, 0)), self.orders)
        table.setflags(write=False)
        return table

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AbelianGroup):
            return NotImplemented
        return self.orders == other.orders

    def __hash__(self) -> int:
        return hash(self.orders)

    def __repr__(self) -> str:
        return "AbelianGroup(" + " x ".join(f"Z_{o}" for o in self.orders) + ")"


class GroupSubsetStats(BaseModel):
    """Difference statistics of a subset A of an abelian group."""

    orders: list[int]
    subset: list[int]
    k: int
    counts: dict[int, int] = Field(..., description="nonzero g -> ordered differences a - a' = g")
    h1: int
    h2: int
    psi2: str = Field(..., description="Sum of squared deviations from the mean, exact")
    mean: str = Field(..., description="k(k-1)/(n-1), exact")
    c4_formula: int | None = Field(None, description="(n/4)(h2 - h1); None for even n")
    c4_direct: int
    is_difference_set: bool


class Psi2TraceEntry(BaseModel):
    restart: int
    evaluations: int
    h2: int
    subset: list[int]


class Psi2SearchResult(BaseModel):
    """Best subset found when minimising Psi_2 over k-subsets."""

    orders: list[int]
    k: int
    mode: str
    best_subset: list[int]
    h2: int
    psi2: str
    evaluations: int
    exact: bool = Field(..., description="True when the search covered every k-subset")
    seed: int | None = None
    trace: list[Psi2TraceEntry] = Field(default_factory=list)

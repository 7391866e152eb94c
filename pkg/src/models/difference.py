"""Cyclic subsets, their difference profiles and structure reports."""

from __future__ import annotations

from collections.abc import Iterable
from enum import Enum
from math import comb

from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.models.errors import InvalidParameterError


class CyclicSubset(BaseModel):
    """A subset D of Z_n stored as a sorted tuple of distinct residues."""

    model_config = ConfigDict(frozen=True)

    n: int = Field(..., ge=1, description="Group order")
    elements: tuple[int, ...] = Field(..., description="Sorted distinct residues in [0, n)")

    @model_validator(mode="after")
    def _check_elements(self) -> CyclicSubset:
        if list(self.elements) != sorted(set(self.elements)):
            raise ValueError("elements must be sorted and distinct")
        if any(not 0 <= e < self.n for e in self.elements):
            raise ValueError(f"elements must lie in [0, {self.n})")
        return self

    @classmethod
    def of(cls, n: int, elements: Iterable[int]) -> CyclicSubset:
        """Build from any iterable of residues in [0, n).

        Raises:
            InvalidParameterError: On repeated or out-of-range residues.
        """
        values = list(elements)
        if n < 1:
            raise InvalidParameterError(f"group order must be positive, got {n}")
        if len(set(values)) != len(values):
            raise InvalidParameterError("residues must be distinct")
        bad = [e for e in values if not 0 <= e < n]
        if bad:
            raise InvalidParameterError(f"residues {bad} outside [0, {n})")
        return cls(n=n, elements=tuple(sorted(values)))

    @classmethod
    def from_line(cls, line: str, n: int) -> CyclicSubset:
        tokens = [t.strip() for t in line.split(",") if t.strip()]
        try:
            values = [int(t) for t in tokens]
        except ValueError:
            raise InvalidParameterError(f"non-integer residue in {line!r}") from None
        return cls.of(n, values)

    @property
    def k(self) -> int:
        return len(self.elements)

    def with_element(self, g: int) -> CyclicSubset:
        return CyclicSubset.of(self.n, (*self.elements, g % self.n))

    def translate(self, t: int) -> CyclicSubset:
        return CyclicSubset.of(self.n, ((e + t) % self.n for e in self.elements))

    def scale(self, u: int) -> CyclicSubset:
        """Image under multiplication by a unit u of Z_n."""
        return CyclicSubset.of(self.n, ((e * u) % self.n for e in self.elements))

    def to_line(self) -> str:
        return ",".join(str(e) for e in self.elements)


class DifferenceProfile(BaseModel):
    """Ordered-difference counts of a cyclic subset, one entry per nonzero residue."""

    n: int
    counts: dict[int, int] = Field(..., description="g -> #{(d, d') : d - d' = g}")

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def values(self) -> set[int]:
        return set(self.counts.values())


class StructureKind(str, Enum):
    DIFFERENCE_SET = "difference_set"
    ALMOST_DIFFERENCE_SET = "almost_difference_set"
    NEITHER = "neither"


class DifferenceClassification(BaseModel):
    """Result of classifying a subset's difference structure.

    ``almost`` is the relaxed reading: counts within {lam, lam + 1}, without
    requiring both values to occur.
    """

    kind: StructureKind
    lam: int | None = Field(None, description="Smallest difference count when kind is not neither")
    almost: bool = Field(..., description="Counts lie in {lam, lam + 1}")
    relaxed: bool = Field(..., description="Whether relaxed mode was requested")

    @property
    def label(self) -> str:
        if self.kind is StructureKind.NEITHER:
            return self.kind.value
        return f"{self.kind.value}({self.lam})"

    @property
    def accepted_as_almost(self) -> bool:
        """Almost difference set in the requested mode."""
        if self.relaxed:
            return self.almost
        return self.kind is StructureKind.ALMOST_DIFFERENCE_SET


class DesignParams(BaseModel):
    """Parameters (v, k, lam) of a symmetric design."""

    v: int
    k: int
    lam: int

    @property
    def counting_identity_holds(self) -> bool:
        return self.v * comb(self.k, 2) == comb(self.v, 2) * self.lam


class CompletionReport(BaseModel):
    """Completion elements of a planar difference set and their cross-checks."""

    n: int
    D: list[int]
    classification: str
    lam: int = Field(..., serialization_alias="lambda")
    completions: list[int]
    expected_count: int
    completed_classifications: dict[int, str] = Field(default_factory=dict)
    passed: bool = Field(..., serialization_alias="pass")


class GeometryReport(BaseModel):
    """Structure of the non-completion blocks d/2 + D/2 of a planar set."""

    q: int
    n: int
    parity: str = Field(..., description="'even' (dual hyperoval) or 'odd' (ovals)")
    blocks: list[list[int]]
    partition_ok: bool = Field(..., description="Blocks cover exactly the non-completions")
    pairwise_single: bool = Field(..., description="Every two blocks meet in one point")
    no_triple_points: bool
    blocks_are_lines: bool = Field(..., description="Every block is a translate of D")
    line_translates: list[int | None] = Field(default_factory=list)
    hyperoval_ok: bool | None = Field(None, description="q even: D and the blocks meet points 0 or 2 times")
    arcs_ok: bool | None = Field(None, description="q odd: no line meets a block in 3 points")
    passed: bool = Field(..., serialization_alias="pass")

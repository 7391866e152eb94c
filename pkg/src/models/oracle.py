"""Oracle results: exact minimum C4 counts at tiny n."""

from __future__ import annotations

from enum import Enum

from pydantic import BaseModel, Field


class OracleStatus(str, Enum):
    OPTIMAL = "optimal"
    INCONCLUSIVE = "inconclusive"


class OracleResult(BaseModel):
    """Minimum C4 count over m-edge subgraphs of K_{n,n} (optionally containing a fixed graph).

    An inconclusive result carries ``minimum = None``; ``best_found`` is then
    only an upper bound.
    """

    n: int
    m: int
    status: OracleStatus
    minimum: int | None = Field(None, description="Proven minimum; None when inconclusive")
    best_found: int | None = Field(None, description="C4 count of the best graph seen")
    witness_edges: list[tuple[int, int]] = Field(default_factory=list)
    nodes: int = Field(..., description="Search nodes explored")
    lower_bound: int = Field(..., description="improved_lower_bound(n, m, 2, 2)")
    fixed_edges: int = Field(0, description="Edges forced by the contained graph")
    symmetry: bool = True
    bound_cut: bool = False
    shuffle_seed: int | None = None
    elapsed_ms: float = Field(0.0, description="Wall time; excluded from reproducible output")


class OracleTableRow(BaseModel):
    m: int
    oracle: int | None
    plain: str
    improved: int
    gap: int | None
    status: OracleStatus


class SupergraphReport(BaseModel):
    """Minimum C4 over the plane's development plus ``extra`` further edges."""

    q: int
    n: int
    extra: int
    m: int
    minimum: int | None
    improved_bound: int
    gap: int | None = Field(None, description="minimum - improved_bound")
    status: OracleStatus
    in_claimed_range: bool = Field(..., description="extra > n, the range of the strict-gap claim")
    claim_holds: bool | None = Field(None, description="minimum > improved_bound; None when inconclusive")
    nodes: int
    witness_extra_edges: list[tuple[int, int]] = Field(default_factory=list)

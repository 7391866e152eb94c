"""Parameters and reports for the finite-field graph G^(q,k)."""

from __future__ import annotations

from pydantic import BaseModel, ConfigDict, Field


class MorsParams(BaseModel):
    """Parameters of G^(q,k).

    ``root_index`` picks the primitive root by its canonical index in GF(q);
    None means the canonical primitive element. ``delta`` shifts the order-k
    subgroup to the coset g^delta * H.
    """

    model_config = ConfigDict(frozen=True)

    q: int = Field(..., ge=2)
    k: int = Field(..., ge=1)
    root_index: int | None = Field(None, ge=1)
    delta: int = 0


class MorsPrediction(BaseModel):
    """Closed-form statistics of G^(q,k), identical on both classes.

    Exact rationals are strings. ``*_if_uniform`` fields are the values a
    graph with codegrees in {0, k} only would have; they are reported for
    comparison and are not the exact predictions.
    """

    q: int
    k: int
    t: int
    n: int
    m: int
    degree: int
    blocks: int = Field(..., description="(q - 1) / k")
    codegree_histogram: dict[int, int]
    zero_partners: int = Field(..., description="Codegree-0 partners of each vertex in its class")
    c4: int
    k2t_unordered: int = Field(..., description="K_{2,t} copies with the 2-side in one class")
    k2t_ordered: int = Field(..., description="Twice k2t_unordered")
    c4_over_n2: str
    limit: str = Field(..., description="k(k-1)/4")
    ratio: str | None = Field(None, description="c4_over_n2 / limit, or None when k = 1")
    c4_if_uniform: int
    k2t_if_uniform_unordered: int
    k2t_if_uniform_ordered: int


class MorsCheck(BaseModel):
    name: str
    passed: bool = Field(..., serialization_alias="pass")
    measured: str
    expected: str


class MorsReport(BaseModel):
    """Measured statistics of a built G^(q,k) against the predictions."""

    q: int
    k: int
    delta: int
    root_index: int
    n: int
    m: int
    codegree_histogram_v1: dict[int, int]
    codegree_histogram_v2: dict[int, int]
    c4: int
    k2t_unordered: dict[int, int] = Field(..., description="t -> unordered K_{2,t}, 2-side in V1")
    k2t_unordered_v2: dict[int, int] = Field(..., description="t -> unordered K_{2,t}, 2-side in V2")
    predicted: MorsPrediction
    checks: list[MorsCheck]
    passed: bool = Field(..., serialization_alias="pass")
    counterexample: str | None = None

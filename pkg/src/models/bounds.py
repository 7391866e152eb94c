"""Bound reports and equality-condition reports."""

from __future__ import annotations

from fractions import Fraction

from pydantic import BaseModel, Field


def fraction_str(value: Fraction | int) -> str:
    """Exact rational as 'p/q', or 'p' when the denominator is 1."""
    frac = Fraction(value)
    if frac.denominator == 1:
        return str(frac.numerator)
    return f"{frac.numerator}/{frac.denominator}"


class BoundReport(BaseModel):
    """Plain and improved lower bounds on K_{a,b} copies in an m-edge subgraph of K_{n,n}.

    Regime fields are filled only for a = b = 2. Fields ending in ``_approx``
    are floats for display; everything else is exact.
    """

    n: int
    m: int
    a: int
    b: int
    average_degree: str = Field(..., description="m/n as an exact rational")
    plain_bound: str = Field(..., description="Plain bound as an exact rational")
    improved_bound: int = Field(..., description="Two-stage discrete Jensen bound")
    regime: str | None = Field(None, description="Advisory regime tag (i)-(iv)")
    below_threshold: bool | None = Field(None, description="xi < 0, i.e. below n(sqrt(n) + 1/2)")
    xi_approx: float | None = None
    c_approx: float | None = Field(None, description="xi / (n sqrt(n))")
    poly_bound: str | None = Field(None, description="Explicit quartic bound, exact rational")
    poly_bound_approx: float | None = None
    asymptote_approx: float | None = Field(None, description="Leading term of the regime's asymptotic")
    quartic_asymptote_approx: float | None = Field(None, description="(m/n)^4 / 4")


class EqualityReport(BaseModel):
    """Whether a graph satisfies the equality conditions of the plain or improved bound."""

    mode: str = Field(..., description="'plain' or 'improved'")
    a: int
    passed: bool = Field(..., serialization_alias="pass")
    degree_min: int
    degree_max: int
    codegree_min: int
    codegree_max: int
    degree_witness: list[list[int | str]] | None = Field(
        None, description="[side, vertex, degree] for a min and a max degree vertex"
    )
    codegree_witness: list[list[int]] | None = Field(
        None, description="a-subsets of X with the least and the largest codegree"
    )

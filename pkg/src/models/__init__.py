"""Pydantic data models and plain value types for the supersaturation toolkit."""

from src.models.bounds import BoundReport, EqualityReport, fraction_str
from src.models.difference import (
    CompletionReport,
    CyclicSubset,
    DifferenceClassification,
    DifferenceProfile,
    GeometryReport,
)
from src.models.errors import ErrorCode, ErrorResponse, SupersatError
from src.models.graph import BipartiteGraph, Side
from src.models.group import AbelianGroup, GroupSubsetStats, Psi2SearchResult
from src.models.manifest import RunManifest
from src.models.mors import MorsParams, MorsPrediction, MorsReport
from src.models.oracle import OracleResult, OracleStatus, OracleTableRow, SupergraphReport

__all__ = [
    "AbelianGroup",
    "BipartiteGraph",
    "BoundReport",
    "CompletionReport",
    "CyclicSubset",
    "DifferenceClassification",
    "DifferenceProfile",
    "EqualityReport",
    "ErrorCode",
    "ErrorResponse",
    "GeometryReport",
    "GroupSubsetStats",
    "MorsParams",
    "MorsPrediction",
    "MorsReport",
    "OracleResult",
    "OracleStatus",
    "OracleTableRow",
    "Psi2SearchResult",
    "RunManifest",
    "Side",
    "SupergraphReport",
    "SupersatError",
    "fraction_str",
]

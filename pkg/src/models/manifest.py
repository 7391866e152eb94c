"""Run manifest model."""

from __future__ import annotations

from pydantic import BaseModel, Field


class RunManifest(BaseModel):
    """Reproducibility record for one CLI run.

    Carries no timestamps or host details: two runs with the same flags
    produce byte-identical manifests.
    """

    subcommand: str = Field(..., description="Full subcommand path, e.g. 'construct mors'")
    parameters: dict[str, str] = Field(
        default_factory=dict, description="Flag values as strings, sorted by flag name"
    )
    tool_version: str = Field(..., description="Package version that produced the run")
    output_checksums: dict[str, str] = Field(
        default_factory=dict, description="sha256 of stdout ('-') and of every written file"
    )
    exit_code: int = Field(0, description="Process exit code of the run")

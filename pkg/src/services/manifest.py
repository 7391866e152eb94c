"""Run manifest service: build, log and persist reproducibility records."""

from __future__ import annotations

import hashlib
import logging
from collections.abc import Mapping
from pathlib import Path

from src import __version__
from src.models.errors import InvalidParameterError
from src.models.manifest import RunManifest

logger = logging.getLogger(__name__)

# Flags that never change a run's output and stay out of the manifest
_EXCLUDED_PARAMETERS = frozenset({"command", "action", "handler", "subcommand", "manifest", "log_level", "threads"})


def checksum(payload: str | bytes) -> str:
    """Return the hex sha256 of ``payload`` (strings are UTF-8 encoded)."""
    data = payload.encode("utf-8") if isinstance(payload, str) else payload
    return hashlib.sha256(data).hexdigest()


def build_manifest(
    subcommand: str,
    parameters: Mapping[str, object],
    stdout_payload: str,
    written_files: list[Path] | None = None,
    exit_code: int = 0,
) -> RunManifest:
    """Build the manifest for a finished run.

    Args:
        subcommand: Subcommand path, e.g. ``"oracle table"``.
        parameters: Parsed CLI flags.
        stdout_payload: Everything the run printed on stdout.
        written_files: Files written through ``--out``.
        exit_code: The run's exit code.

    Returns:
        The manifest with sorted parameters and checksums.
    """
    params = {
        key: str(value)
        for key, value in sorted(parameters.items())
        if key not in _EXCLUDED_PARAMETERS and value is not None
    }
    checksums = {"-": checksum(stdout_payload)}
    for path in written_files or []:
        checksums[str(path)] = checksum(path.read_bytes())

    return RunManifest(
        subcommand=subcommand,
        parameters=params,
        tool_version=__version__,
        output_checksums=dict(sorted(checksums.items())),
        exit_code=exit_code,
    )


def log_manifest(manifest: RunManifest) -> None:
    """Write a manifest to the structured JSON log."""
    logger.info(
        "run_manifest",
        extra={
            "subcommand": manifest.subcommand,
            "status": manifest.exit_code,
            "parameters": manifest.parameters,
            "tool_version": manifest.tool_version,
            "output_checksums": manifest.output_checksums,
        },
    )


def write_manifest(manifest: RunManifest, path: Path) -> None:
    try:
        path.write_text(manifest.model_dump_json(indent=2) + "\n", encoding="utf-8")
    except OSError as exc:
        raise InvalidParameterError(f"cannot write manifest {path}: {exc.strerror}") from exc

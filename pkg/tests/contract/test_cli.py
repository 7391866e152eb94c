"""Contract tests for the supersat command line: JSON shapes, exit codes and manifests."""

from __future__ import annotations

import json
import logging
from collections.abc import Iterator
from pathlib import Path
from typing import Any

import pytest

from src.main import EXIT_FAILED, EXIT_INCONCLUSIVE, EXIT_OK, EXIT_USAGE, main
from src.services.counting import count_c4
from src.services.graph_io import load_difference_set, load_graph
from src.services.manifest import checksum


@pytest.fixture(autouse=True)
def restore_root_logger() -> Iterator[None]:
    """main() reconfigures the root logger; put it back after each test."""
    root = logging.getLogger()
    handlers, level = list(root.handlers), root.level
    yield
    root.handlers[:] = handlers
    root.setLevel(level)


def run(capsys: pytest.CaptureFixture[str], *argv: str) -> tuple[int, str, str]:
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(capsys: pytest.CaptureFixture[str], *argv: str) -> tuple[int, Any]:
    code, out, _ = run(capsys, *argv)
    return code, json.loads(out)


class TestBoundCommands:
    """Bound subcommands."""

    def test_improved(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Two-stage bound for 22 edges on 7+7 vertices."""
        code, data = run_json(capsys, "bound", "improved", "--n", "7", "--m", "22")
        assert code == EXIT_OK
        assert data["improved_bound"] == 3
        assert set(data) == {"n", "m", "a", "b", "plain_bound", "improved_bound"}

    def test_plain_is_exact_string(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Plain bounds print as exact rationals."""
        code, data = run_json(capsys, "bound", "plain", "--n", "7", "--m", "28")
        assert code == EXIT_OK
        assert data["plain_bound"] == "21"

    def test_equality_on_plane(self, capsys: pytest.CaptureFixture[str], heawood_path: Path) -> None:
        code, data = run_json(capsys, "bound", "equality", "--graph", str(heawood_path), "--mode", "plain")
        assert code == EXIT_OK
        assert data["pass"] is True


class TestConstructCommands:
    """Construct subcommands and their --out files."""

    def test_singer_writes_set_file(self, capsys: pytest.CaptureFixture[str], tmp_path: Path) -> None:
        """The Fano set is written and reloads to the printed elements."""
        out = tmp_path / "fano.set"
        code, data = run_json(capsys, "construct", "singer", "--q", "2", "--out", str(out))
        assert code == EXIT_OK
        assert data["n"] == 7
        assert data["classification"] == "difference_set(1)"
        assert list(load_difference_set(out, 7).elements) == data["D"]

    def test_mors_graph_file(self, capsys: pytest.CaptureFixture[str], tmp_path: Path) -> None:
        out = tmp_path / "g73.graph"
        code, data = run_json(capsys, "construct", "mors", "--q", "7", "--k", "3", "--out", str(out))
        assert code == EXIT_OK
        assert data["pass"] is True
        assert data["c4"] == 168
        graph = load_graph(out)
        assert (graph.n_x, graph.m) == (14, 84)
        assert count_c4(graph) == 168

    def test_mors_k_not_dividing(self, capsys: pytest.CaptureFixture[str]) -> None:
        """k must divide q - 1."""
        code, _, err = run(capsys, "construct", "mors", "--q", "7", "--k", "4")
        assert code == EXIT_USAGE
        assert json.loads(err.splitlines()[-1])["error"] == "invalid_parameter"

    def test_complete_fano(self, capsys: pytest.CaptureFixture[str]) -> None:
        code, data = run_json(capsys, "construct", "complete", "--q", "2")
        assert code == EXIT_OK
        assert data["c4"] == data["improved_bound"] == 21
        assert data["m"] == 28


class TestCountCommands:
    """Count subcommands on graph files."""

    def test_c4_of_plane(self, capsys: pytest.CaptureFixture[str], heawood_path: Path) -> None:
        code, data = run_json(capsys, "count", "c4", "--graph", str(heawood_path))
        assert code == EXIT_OK
        assert data == {"m": 21, "c4": 0}

    def test_codegrees(self, capsys: pytest.CaptureFixture[str], heawood_path: Path) -> None:
        _, data = run_json(capsys, "count", "codegrees", "--graph", str(heawood_path), "--side", "Y")
        assert data == {"side": "Y", "histogram": {"1": 21}}

    def test_k2t_reports_both_conventions(self, capsys: pytest.CaptureFixture[str], tmp_path: Path) -> None:
        """Ordered pairs double the unordered K_{2,3} count."""
        out = tmp_path / "g73.graph"
        run(capsys, "construct", "mors", "--q", "7", "--k", "3", "--out", str(out))
        _, data = run_json(capsys, "count", "k2t", "--graph", str(out), "--t", "3")
        assert data["unordered"] == 42
        assert data["ordered"] == 84

    def test_malformed_file(self, capsys: pytest.CaptureFixture[str], malformed_graph_path: Path) -> None:
        """A bad graph file exits with usage and names the line."""
        code, out, err = run(capsys, "count", "c4", "--graph", str(malformed_graph_path))
        assert code == EXIT_USAGE
        assert out == ""
        error = json.loads(err.splitlines()[-1])
        assert error["error"] == "malformed_file"
        assert error["line"] == 4

    def test_missing_file(self, capsys: pytest.CaptureFixture[str], tmp_path: Path) -> None:
        code, _, err = run(capsys, "count", "c4", "--graph", str(tmp_path / "absent.graph"))
        assert code == EXIT_USAGE
        error = json.loads(err.splitlines()[-1])
        assert error["error"] == "malformed_file"
        assert "line" not in error


class TestVerifyCommands:
    """Verify subcommands and their pass/fail exit codes."""

    def test_completion(self, capsys: pytest.CaptureFixture[str]) -> None:
        code, data = run_json(capsys, "verify", "completion", "--q", "3")
        assert code == EXIT_OK
        assert data["pass"] is True
        assert len(data["completions"]) == 3

    def test_difference_set_from_file(self, capsys: pytest.CaptureFixture[str], fano_set_path: Path) -> None:
        code, data = run_json(capsys, "verify", "difference-set", "--set-file", str(fano_set_path), "--n", "7")
        assert code == EXIT_OK
        assert data["lambda"] == 1

    def test_not_a_difference_set(self, capsys: pytest.CaptureFixture[str]) -> None:
        """{0,1,2} in Z_5 repeats the difference 1, so the check fails."""
        code, data = run_json(capsys, "verify", "difference-set", "--set", "0,1,2", "--n", "5")
        assert code == EXIT_FAILED
        assert data["pass"] is False

    def test_set_requires_order(self, capsys: pytest.CaptureFixture[str]) -> None:
        code, _, err = run(capsys, "verify", "difference-set", "--set", "1,2,4")
        assert code == EXIT_USAGE
        assert json.loads(err.splitlines()[-1])["error"] == "invalid_parameter"


class TestGroupCommands:
    """Abelian-group statistics and the Psi_2 search."""

    def test_group_summary(self, capsys: pytest.CaptureFixture[str]) -> None:
        code, data = run_json(capsys, "group", "--orders", "5", "--set", "0,1,2")
        assert code == EXIT_OK
        assert data == {"h1": 6, "h2": 10, "psi2": "1", "c4_formula": 5, "c4_direct": 5}

    def test_search_exhaustive(self, capsys: pytest.CaptureFixture[str]) -> None:
        code, data = run_json(capsys, "search", "psi2", "--orders", "7", "--k", "3")
        assert code == EXIT_OK
        assert data["psi2"] == "0"

    def test_search_cap(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Running out of exhaustive budget exits with the budget code."""
        code, _, err = run(capsys, "search", "psi2", "--orders", "13", "--k", "6", "--cap", "100")
        assert code == EXIT_INCONCLUSIVE
        assert json.loads(err.splitlines()[-1])["error"] == "budget_exceeded"


class TestOracleCommands:
    """Exact oracle subcommands."""

    def test_min(self, capsys: pytest.CaptureFixture[str]) -> None:
        code, data = run_json(capsys, "oracle", "min", "--n", "3", "--m", "7")
        assert code == EXIT_OK
        assert data["minimum"] == 2
        assert "elapsed_ms" not in data

    def test_min_inconclusive(self, capsys: pytest.CaptureFixture[str]) -> None:
        """A one-node budget exits with the budget code and no minimum."""
        code, data = run_json(capsys, "oracle", "min", "--n", "4", "--m", "10", "--cap", "1")
        assert code == EXIT_INCONCLUSIVE
        assert data["status"] == "inconclusive"
        assert data["minimum"] is None

    def test_table_csv(self, capsys: pytest.CaptureFixture[str]) -> None:
        code, out, _ = run(capsys, "oracle", "table", "--n", "2", "--csv")
        assert code == EXIT_OK
        assert out.splitlines()[0] == "m,oracle,plain,improved,gap,status"

    def test_table_independent_of_threads(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Pooled workers print the same table as one process."""
        _, single, _ = run(capsys, "oracle", "table", "--n", "3")
        _, pooled, _ = run(capsys, "oracle", "table", "--n", "3", "--threads", "2")
        assert single == pooled

    def test_single_row(self, capsys: pytest.CaptureFixture[str]) -> None:
        """K_{1,1} holds no 4-cycle, with or without its edge."""
        for m in ("0", "1"):
            code, data = run_json(capsys, "oracle", "min", "--n", "1", "--m", m)
            assert code == EXIT_OK
            assert data["minimum"] == 0
            assert data["lower_bound"] == 0

    @pytest.mark.parametrize("name", ["supergraph", "prop34"])
    def test_supergraph_names(self, capsys: pytest.CaptureFixture[str], tmp_path: Path, name: str) -> None:
        """Both names run the plane supergraph check under one manifest subcommand."""
        path = tmp_path / "run.json"
        code, data = run_json(capsys, "oracle", name, "--extra", "0", "--manifest", str(path))
        assert code == EXIT_OK
        assert data["minimum"] == 0
        assert data["m"] == 21
        assert json.loads(path.read_text(encoding="utf-8"))["subcommand"] == "oracle supergraph"


class TestReproCommand:
    """The acceptance suite and its manifests."""

    def test_filtered(self, capsys: pytest.CaptureFixture[str]) -> None:
        code, data = run_json(capsys, "repro", "--filter", "mors")
        assert code == EXIT_OK
        assert data["pass"] is True
        assert data["matrix"] == {"mors": True}

    def test_manifests_are_reproducible(self, capsys: pytest.CaptureFixture[str], tmp_path: Path) -> None:
        """Two runs at one worker and one at eight write byte-identical manifests."""
        paths = [tmp_path / "first.json", tmp_path / "again.json", tmp_path / "pooled.json"]
        for path, threads in zip(paths, ["1", "1", "8"], strict=True):
            code, data = run_json(
                capsys, "repro", "--filter", "determinism", "--threads", threads, "--manifest", str(path)
            )
            assert code == EXIT_OK
            assert data["matrix"] == {"determinism": True}
        first = paths[0].read_bytes()
        assert all(path.read_bytes() == first for path in paths[1:])
        assert json.loads(first)["parameters"] == {"filter": "determinism"}


class TestRunEnvelope:
    """Behaviour shared by every subcommand: manifests, logs and exit codes."""

    def test_manifest_file(self, capsys: pytest.CaptureFixture[str], tmp_path: Path) -> None:
        """The manifest names the flags and hashes stdout."""
        path = tmp_path / "run.json"
        code, out, _ = run(capsys, "bound", "plain", "--n", "7", "--m", "21", "--manifest", str(path))
        assert code == EXIT_OK
        manifest = json.loads(path.read_text(encoding="utf-8"))
        assert manifest["subcommand"] == "bound plain"
        assert manifest["parameters"] == {"a": "2", "b": "2", "m": "21", "n": "7"}
        assert manifest["output_checksums"] == {"-": checksum(out)}

    def test_manifest_logged_at_info(self, capsys: pytest.CaptureFixture[str]) -> None:
        _, _, err = run(capsys, "bound", "plain", "--n", "7", "--m", "21", "--log-level", "info")
        messages = [json.loads(line)["message"] for line in err.splitlines()]
        assert "run_manifest" in messages

    def test_manifest_log_line(self, capsys: pytest.CaptureFixture[str]) -> None:
        """The logged manifest carries the version and the stdout checksum."""
        _, out, err = run(capsys, "bound", "plain", "--n", "7", "--m", "21", "--log-level", "info")
        entries = [json.loads(line) for line in err.splitlines()]
        entry = next(e for e in entries if e["message"] == "run_manifest")
        assert entry["subcommand"] == "bound plain"
        assert entry["parameters"] == {"a": "2", "b": "2", "m": "21", "n": "7"}
        assert entry["tool_version"]
        assert entry["output_checksums"] == {"-": checksum(out)}

    def test_unwritable_out(self, capsys: pytest.CaptureFixture[str], tmp_path: Path) -> None:
        """An --out path in a missing directory is a usage error, not a traceback."""
        target = tmp_path / "missing_dir" / "g.graph"
        code, _, err = run(capsys, "construct", "mors", "--q", "5", "--k", "2", "--out", str(target))
        assert code == EXIT_USAGE
        error = json.loads(err.splitlines()[-1])
        assert error["error"] == "invalid_parameter"
        assert "cannot write" in error["message"]

    def test_quiet_by_default(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Nothing reaches stderr below WARNING."""
        _, _, err = run(capsys, "bound", "plain", "--n", "7", "--m", "21")
        assert err == ""

    def test_unknown_flag(self, capsys: pytest.CaptureFixture[str]) -> None:
        code, out, _ = run(capsys, "bound", "plain", "--n", "7", "--m", "21", "--bogus")
        assert code == EXIT_USAGE
        assert out == ""

    def test_version(self, capsys: pytest.CaptureFixture[str]) -> None:
        code, out, _ = run(capsys, "--version")
        assert code == EXIT_OK
        assert out.startswith("supersat ")

    @pytest.mark.parametrize("flags", [["--threads", "0"], ["--log-level", "chatty"]])
    def test_invalid_settings(self, capsys: pytest.CaptureFixture[str], flags: list[str]) -> None:
        code, _, err = run(capsys, "bound", "plain", "--n", "7", "--m", "21", *flags)
        assert code == EXIT_USAGE
        assert json.loads(err.splitlines()[-1])["error"] == "invalid_parameter"

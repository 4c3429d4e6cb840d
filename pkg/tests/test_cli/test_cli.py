"""
Tests for the Command Line

Each command runs in-process through main() with its output directory under
tmp_path.
"""

import csv
import json
import os
import sys

import pytest
import yaml

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.dirname(__file__))))

from microtrap_gates.artifacts import MANIFEST_NAME, load_manifest
from microtrap_gates.errors import EXIT_CONFIG_ERROR, EXIT_NUMERICAL_ERROR, EXIT_OK
from microtrap_gates.scripts.microtrap_cli import build_parser, main


def _read_json(path):
    with open(path) as f:
        return json.load(f)


def _write_config(tmp_path, data):
    path = tmp_path / "run.yaml"
    path.write_text(yaml.safe_dump(data))
    return str(path)


# ============================================================================
# PARSER TESTS
# ============================================================================

class TestParser:
    """Subcommands and shared flags."""

    def test_shared_flags(self):
        args = build_parser().parse_args(["fh", "count", "--geometry", "chain", "--seed", "3", "--format", "csv"])
        assert args.command == "fh"
        assert args.action == "count"
        assert args.seed == 3
        assert args.format == "csv"

    def test_gate_sweep_action(self):
        args = build_parser().parse_args(["gate", "sweep", "--seed", "4"])
        assert args.action == "sweep"

    def test_unknown_action_rejected(self):
        with pytest.raises(SystemExit):
            build_parser().parse_args(["gate", "explode"])


# ============================================================================
# COMMAND TESTS
# ============================================================================

class TestCommands:
    """End-to-end command runs."""

    def test_init_config(self, tmp_path, capsys):
        path = str(tmp_path / "cfg" / "run.yaml")
        assert main(["init-config", path]) == EXIT_OK
        assert os.path.exists(path)
        assert main(["init-config", path]) == EXIT_OK
        assert "already exists" in capsys.readouterr().out

    def test_generated_config_runs(self, tmp_path):
        path = str(tmp_path / "run.yaml")
        main(["init-config", path])
        out = str(tmp_path / "out")
        assert main(["modes", "--xi-only", "--config", path, "--out", out]) == EXIT_OK
        assert _read_json(os.path.join(out, "xi.json"))["xi"] == pytest.approx(1.2e-4, rel=0.05)

    def test_modes_csv_only(self, tmp_path):
        out = str(tmp_path)
        assert main(["modes", "--out", out, "--format", "csv"]) == EXIT_OK
        with open(os.path.join(out, "modes.csv")) as f:
            rows = list(csv.reader(f))
        assert len(rows) == 1 + 8
        assert not os.path.exists(os.path.join(out, "modes.json"))

    def test_fh_count_chain(self, tmp_path, capsys):
        out = str(tmp_path)
        assert main(["fh", "count", "--geometry", "chain", "--out", out]) == EXIT_OK
        census = _read_json(os.path.join(out, "fh_census.json"))
        assert census["total"] == 4716
        assert census["geometry"] == "chain"
        manifest = load_manifest(os.path.join(out, MANIFEST_NAME))
        assert manifest["run"]["command"] == "fh count"
        assert "fh_census.json" in manifest["outputs"]
        assert "✅ Done" in capsys.readouterr().out

    def test_fh_feasibility(self, tmp_path):
        out = str(tmp_path)
        assert main(["fh", "feasibility", "--geometry", "chain", "--out", out]) == EXIT_OK
        report = _read_json(os.path.join(out, "fh_feasibility.json"))
        assert report["gates_per_step"] == 4716
        assert report["total_time"] == pytest.approx(4716 * 10 * 1.7e-6)

    def test_fh_verify(self, tmp_path):
        out = str(tmp_path)
        assert main(["fh", "verify", "--out", out]) == EXIT_OK
        data = _read_json(os.path.join(out, "trotter.json"))
        assert [row["n"] for row in data["rows"]] == [8, 16, 32, 64]
        assert data["mapping_deviation"] < 1e-12

    def test_gate_eval(self, tmp_path):
        out = str(tmp_path)
        assert main(["gate", "eval", "--sequence", "example1", "--calibrate", "--out", out]) == EXIT_OK
        data = _read_json(os.path.join(out, "gate_eval.json"))
        assert data["metrics"]["infidelity"] <= 1e-8
        assert data["target_ions"] == [0, 1]

    def test_verbose_prints_config(self, tmp_path, capsys):
        assert main(["fh", "terms", "--verbose", "--out", str(tmp_path)]) == EXIT_OK
        assert "Microtrap Run Configuration" in capsys.readouterr().out

    def test_seed_recorded(self, tmp_path):
        out = str(tmp_path)
        main(["fh", "terms", "--seed", "17", "--out", out, "--format", "json"])
        manifest = load_manifest(os.path.join(out, MANIFEST_NAME))
        assert manifest["run"]["seed"] == 17
        assert manifest["config"]["seed"] == 17

    def test_xi_only_prints_only_xi(self, tmp_path, capsys):
        out = str(tmp_path)
        assert main(["modes", "--xi-only", "--out", out]) == EXIT_OK
        lines = capsys.readouterr().out.strip().splitlines()
        assert len(lines) == 1
        assert lines[0].startswith("📊 xi = ")
        assert os.path.exists(os.path.join(out, "xi.json"))

    def test_gate_sweep(self, tmp_path):
        """Sweep table, characteristic scatter, rate law and diagonal comparison from one command."""
        path = _write_config(tmp_path, {
            "optimize": {"group_count": 4, "z_bound": 60},
            "sweep": {"gate_times_tau0": [1.2, 1.7], "z_bounds": [60, 120], "threshold": 1.0,
                      "operation_times_tau0": [2.6, 3.4]},
        })
        out = str(tmp_path / "out")
        assert main(["gate", "sweep", "--config", path, "--out", out]) == EXIT_OK

        with open(os.path.join(out, "sweep.csv")) as f:
            rows = list(csv.reader(f))
        assert len(rows) == 1 + 4
        characteristic = _read_json(os.path.join(out, "characteristic.json"))
        assert characteristic["threshold"] == 1.0
        assert len(characteristic["points"]) == 4
        law = _read_json(os.path.join(out, "rate_law.json"))
        assert law["exponent"] == pytest.approx(-5.0 / 3.0)
        assert law["coefficient"] > 0
        comparison = _read_json(os.path.join(out, "diagonal_comparison.json"))
        assert comparison["fidelity_threshold"] == 0.0
        assert comparison["diagonal_ions"] == [0, 3]
        assert comparison["operation_times"] == [2.6, 3.4]
        assert comparison["coefficient_ratio"] > 0
        manifest = load_manifest(os.path.join(out, MANIFEST_NAME))
        assert manifest["run"]["command"] == "gate sweep"
        assert "rate_law.json" in manifest["outputs"]

    def test_gate_sweep_without_comparison(self, tmp_path):
        path = _write_config(tmp_path, {
            "optimize": {"group_count": 4, "z_bound": 60},
            "sweep": {"gate_times_tau0": [1.2], "compare_diagonal": False},
        })
        out = str(tmp_path / "out")
        assert main(["gate", "sweep", "--config", path, "--out", out, "--format", "json"]) == EXIT_OK
        assert os.path.exists(os.path.join(out, "sweep.json"))
        assert not os.path.exists(os.path.join(out, "diagonal_comparison.json"))


# ============================================================================
# EXIT CODE TESTS
# ============================================================================

class TestExitCodes:
    """Errors map onto exit codes."""

    def test_unknown_config_key(self, tmp_path, capsys):
        path = _write_config(tmp_path, {"gate": {"sequnce": "example1"}})
        assert main(["modes", "--config", path, "--out", str(tmp_path)]) == EXIT_CONFIG_ERROR
        assert "gate.sequnce" in capsys.readouterr().err

    def test_missing_config(self, tmp_path):
        assert main(["modes", "--config", str(tmp_path / "nope.yaml")]) == EXIT_CONFIG_ERROR

    def test_bad_sequence_file(self, tmp_path):
        bad = tmp_path / "seq.json"
        bad.write_text(json.dumps({"z": [1], "t_over_tau0": [0.0]}))
        code = main(["gate", "eval", "--sequence", str(bad), "--out", str(tmp_path)])
        assert code == EXIT_CONFIG_ERROR

    def test_numerical_failure(self, tmp_path):
        """Ions squeezed to 1 um cannot stay in their cells."""
        path = _write_config(tmp_path, {"array": {"spacing_um": 1.0}})
        assert main(["modes", "--config", path, "--out", str(tmp_path)]) == EXIT_NUMERICAL_ERROR

    def test_oversize_verify(self, tmp_path):
        path = _write_config(tmp_path, {"fh": {"verify_rows": 3, "verify_cols": 3}})
        assert main(["fh", "verify", "--config", path, "--out", str(tmp_path)]) == EXIT_CONFIG_ERROR

    def test_negative_seed_flag(self, tmp_path, capsys):
        assert main(["fh", "terms", "--seed", "-1", "--out", str(tmp_path)]) == EXIT_CONFIG_ERROR
        assert "seed" in capsys.readouterr().err

    def test_non_numeric_mass(self, tmp_path):
        path = _write_config(tmp_path, {"array": {"mass_amu": "heavy"}})
        assert main(["modes", "--config", path, "--out", str(tmp_path)]) == EXIT_CONFIG_ERROR

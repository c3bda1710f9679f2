"""Tests for the command-line entry point."""

import json
import logging

import pytest

from src.exceptions import NumericalError
from src.main import EXIT_DATA, EXIT_NUMERICAL, EXIT_OK, EXIT_USAGE, VqeLab, build_parser, main


@pytest.fixture(autouse=True)
def isolated_logging(temp_dir, monkeypatch):
    """Run in temp_dir so vqe_lab.log lands there, and restore root handlers afterwards."""
    monkeypatch.chdir(temp_dir)
    root = logging.getLogger()
    handlers, level = list(root.handlers), root.level
    yield
    for handler in root.handlers:
        if handler not in handlers:
            handler.close()
    root.handlers = handlers
    root.setLevel(level)


@pytest.fixture
def cli(temp_dir, config_file):
    """Invoke main() with the temp config and no .env file."""
    def run(*args):
        return main(["--config", str(config_file), "--env", str(temp_dir / "missing.env"), *args])
    return run


def output_value(text, key):
    for line in text.splitlines():
        if line.startswith(f"{key}: "):
            return line.split(": ", 1)[1]
    raise AssertionError(f"{key} not in output")


class TestParser:
    """Tests for build_parser."""

    def test_sweep_arguments(self):
        """Test range and list arguments are parsed."""
        args = build_parser().parse_args(["sweep", "--templates", "1,3", "--depths", "2..5", "--bonds", "0.5,0.7"])

        assert args.templates == [1, 3]
        assert args.depths.start == 2
        assert args.depths.end == 5
        assert args.bonds == [0.5, 0.7]
        assert args.overwrite is None

    def test_unknown_option_exits_one(self, cli):
        """Test usage errors exit with status 1."""
        assert cli("dump-circuit", "--template", "4", "--depth", "1", "--bogus") == EXIT_USAGE

    def test_missing_command(self, cli):
        """Test a missing subcommand."""
        assert cli() == EXIT_USAGE

    def test_template_out_of_choices(self, cli):
        """Test template ids outside 1-4."""
        assert cli("dump-circuit", "--template", "5", "--depth", "1") == EXIT_USAGE


class TestCommands:
    """Tests for each subcommand."""

    def test_dump_circuit(self, cli, capsys):
        """Test the gate listing and its header."""
        assert cli("dump-circuit", "--template", "4", "--depth", "1") == EXIT_OK
        out = capsys.readouterr().out

        assert "# depth 1: N_gt=8 N_g=11 entangling=3" in out
        assert "RY 0 0" in out
        assert "CNOT 2,3" in out

    def test_bounds_single(self, cli, capsys):
        """Test N_gt=8 at the reference norm."""
        assert cli("bounds", "--ngt", "8", "--opnorm", "1.16863955") == EXIT_OK
        out = capsys.readouterr().out

        assert float(output_value(out, "log_lower")) == pytest.approx(750.04, abs=0.01)
        assert float(output_value(out, "log_upper")) == pytest.approx(1124.6, abs=0.1)
        assert output_value(out, "trainable-gate floor") == "2"
        assert output_value(out, "lower_bound_valid") == "true"

    def test_bounds_table(self, cli, capsys, temp_dir):
        """Test the per-depth table and bounds.csv."""
        out_dir = temp_dir / "bounds"
        assert cli("bounds", "--template", "2", "--depths", "1..3", "--opnorm", "1.0", "--out", str(out_dir)) == EXIT_OK
        out = capsys.readouterr().out

        assert "template,depth,n_gt,log_lower,log_upper,avg_expressibility" in out
        assert "2,3,32," in out
        lines = (out_dir / "bounds.csv").read_text().splitlines()
        assert len(lines) == 4

    def test_bounds_norm_from_file(self, cli, capsys, constant_hamiltonian_file):
        """Test the norm falls back to the lowest-energy grid bond (1 * I)."""
        assert cli("bounds", "--ngt", "4") == EXIT_OK
        out = capsys.readouterr().out
        assert float(output_value(out, "operator norm")) == pytest.approx(1.0)

    def test_bounds_without_arguments(self, cli):
        """Test bounds needs --ngt or --template."""
        assert cli("bounds", "--opnorm", "1.0") == EXIT_DATA

    def test_exact(self, cli, capsys, constant_hamiltonian_file):
        """Test exact energies and norms of the constant file."""
        assert cli("exact") == EXIT_OK
        lines = capsys.readouterr().out.splitlines()
        rows = [line for line in lines if line.startswith(("bond,", "0."))]

        assert rows[0] == "bond,ground_energy,operator_norm,operator_norm_without_identity"
        assert rows[1] == "0.3,2.0,2.0,0.0"
        assert rows[2] == "0.5,1.0,1.0,0.0"

    def test_vqe(self, cli, capsys, constant_hamiltonian_file):
        """Test a single run on a constant Hamiltonian."""
        assert cli("vqe", "--template", "4", "--depth", "1", "--bond", "0.5", "--seed", "3") == EXIT_OK
        out = capsys.readouterr().out

        assert float(output_value(out, "energy")) == pytest.approx(1.0)
        assert output_value(out, "converged") == "true"
        assert len(output_value(out, "parameters").split()) == 8

    def test_vqe_unknown_bond(self, cli, constant_hamiltonian_file):
        """Test a bond missing from the file."""
        assert cli("vqe", "--template", "4", "--depth", "1", "--bond", "0.9") == EXIT_DATA

    def test_missing_hamiltonian_file(self, cli):
        """Test a missing coefficient file exits with status 2."""
        assert cli("exact") == EXIT_DATA

    def test_malformed_hamiltonian_file(self, cli, temp_dir):
        """Test a malformed coefficient file exits with status 2."""
        (temp_dir / "h.txt").write_text("# molecule=H2 qubits=4\nbond 0.7\nIIXQ 0.1\n")
        assert cli("exact") == EXIT_DATA

    def test_numerical_error(self, cli, mocker, constant_hamiltonian_file):
        """Test numerical failures exit with status 3."""
        mocker.patch("src.main.minimize", side_effect=NumericalError("state norm drifted"))
        assert cli("vqe", "--template", "4", "--depth", "1", "--bond", "0.5") == EXIT_NUMERICAL

    def test_invalid_config(self, temp_dir):
        """Test an invalid YAML value exits with status 2."""
        path = temp_dir / "bad.yaml"
        path.write_text("sweep:\n  trials: 0\n")
        assert main(["--config", str(path), "dump-circuit", "--template", "1", "--depth", "1"]) == EXIT_DATA


class TestSweepCommand:
    """Tests for the sweep subcommand."""

    def test_sweep_writes_artifacts(self, cli, temp_dir, constant_hamiltonian_file):
        """Test a sweep on constant Hamiltonians writes the three artifacts."""
        assert cli("sweep") == EXIT_OK
        out_dir = temp_dir / "results"

        assert sorted(p.name for p in out_dir.iterdir()) == ["meta.json", "report.txt", "sweep.csv"]
        meta = json.loads((out_dir / "meta.json").read_text())
        assert meta["reference_energy"] == pytest.approx(1.0)
        assert meta["reference_energy_bond"] == 0.5
        assert meta["operator_norm"] == pytest.approx(1.0)
        assert len(meta["seeds"]["2:1"]) == 2
        assert len((out_dir / "sweep.csv").read_text().splitlines()) == 7

    def test_sweep_refuses_nonempty_directory(self, cli, temp_dir, constant_hamiltonian_file):
        """Test a second sweep without --overwrite exits with status 2."""
        assert cli("sweep") == EXIT_OK
        assert cli("sweep") == EXIT_DATA
        assert cli("sweep", "--overwrite") == EXIT_OK

    def test_sweep_flags_override_config(self, cli, mocker, temp_dir, constant_hamiltonian_file):
        """Test CLI flags reach the SweepConfig."""
        run_sweep = mocker.patch.object(VqeLab, "run_sweep", return_value=EXIT_OK)
        assert cli(
            "sweep", "--templates", "1", "--depths", "2..4", "--depth-caps", "none",
            "--trials", "3", "--seed", "99", "--workers", "2", "--out", str(temp_dir / "other"),
        ) == EXIT_OK

        sweep_config = run_sweep.call_args.args[0]
        assert sweep_config.templates == [1]
        assert sweep_config.depths_for(1) == [2, 3, 4]
        assert sweep_config.trials == 3
        assert sweep_config.master_seed == 99
        assert sweep_config.workers == 2
        assert sweep_config.output_dir == str(temp_dir / "other")

    def test_sweep_depth_caps_leave_nothing(self, cli, constant_hamiltonian_file):
        """Test a cap below depth_start is rejected."""
        assert cli("sweep", "--depths", "3..4", "--depth-caps", "2=2") == EXIT_DATA

"""Tests for config module."""

import pytest
import os
from src.config import ConfigManager, sanitize_env_value
from src.models import Config


class TestConfigManager:
    """Tests for ConfigManager class."""

    def test_load_config_from_file(self, temp_dir, config_file):
        """Test loading configuration from files."""
        manager = ConfigManager(
            config_path=str(config_file),
            env_path=str(temp_dir / "missing.env")
        )

        assert manager.config.optimizer.learning_rate == 0.3
        assert manager.config.sweep.templates == [2, 4]
        assert manager.config.sweep.master_seed == 7
        assert manager.config.bounds.reference_bond == 0.8

    def test_load_config_missing_file(self, temp_dir):
        """Test loading configuration with missing config file."""
        manager = ConfigManager(
            config_path=str(temp_dir / "nonexistent.yaml"),
            env_path=str(temp_dir / "missing.env")
        )

        # Should use default configuration
        assert isinstance(manager.config, Config)
        assert manager.config.optimizer.learning_rate == 0.4
        assert manager.config.sweep.depth_caps == {1: 10}

    def test_malformed_file(self, temp_dir):
        """Test an invalid YAML value is re-raised."""
        path = temp_dir / "config.yaml"
        path.write_text("optimizer:\n  learning_rate: -1\n")
        with pytest.raises(ValueError):
            ConfigManager(config_path=str(path), env_path=str(temp_dir / "missing.env"))

    def test_env_file_overrides(self, temp_dir, config_file, env_file):
        """Test VQE_LAB_* values from the .env file win over YAML."""
        manager = ConfigManager(config_path=str(config_file), env_path=str(env_file))

        assert manager.config.sweep.workers == 3
        assert manager.config.sweep.master_seed == 11

    def test_process_env_overrides(self, temp_dir, config_file):
        """Test overrides taken from the process environment."""
        os.environ["VQE_LAB_HAMILTONIAN_FILE"] = "'other.txt'"
        os.environ["VQE_LAB_OUTPUT_DIR"] = "runs/a"

        manager = ConfigManager(config_path=str(config_file), env_path=str(temp_dir / "missing.env"))

        assert manager.config.hamiltonian_file == "other.txt"
        assert manager.config.output_dir == "runs/a"

    @pytest.mark.parametrize("name,value", [
        ("VQE_LAB_WORKERS", "zero"),
        ("VQE_LAB_WORKERS", "0"),
        ("VQE_LAB_MASTER_SEED", "-4"),
    ])
    def test_invalid_override(self, temp_dir, config_file, name, value):
        """Test invalid override values name the variable."""
        os.environ[name] = value
        with pytest.raises(ValueError, match=name):
            ConfigManager(config_path=str(config_file), env_path=str(temp_dir / "missing.env"))

    def test_sweep_config(self, temp_dir, config_file):
        """Test the derived SweepConfig and CLI-style overrides."""
        manager = ConfigManager(config_path=str(config_file), env_path=str(temp_dir / "missing.env"))

        sweep = manager.get_sweep_config()
        assert sweep.bond_grid == [0.3, 0.5]
        assert sweep.optimizer.max_iterations == 200
        assert sweep.trials == 2

        sweep = manager.get_sweep_config(trials=5, templates=None)
        assert sweep.trials == 5
        assert sweep.templates == [2, 4]

    def test_optimizer_config(self, temp_dir, config_file):
        """Test OptimizerConfig construction with a seed."""
        manager = ConfigManager(config_path=str(config_file), env_path=str(temp_dir / "missing.env"))
        opt = manager.get_optimizer_config(seed=9)
        assert opt.seed == 9
        assert opt.tolerance == 1e-7

    def test_config_defaults(self):
        """Test Config model with default values."""
        config = Config()

        assert config.debug is False
        assert config.hamiltonian_file == "data/h2_sto3g_parity.txt"
        assert config.sweep.trials == 10
        assert config.sweep.bond_start == 0.3
        assert config.bounds.eps == 0.01
        assert config.optimizer.gradient_method == "adjoint"


class TestSanitizeEnvValue:
    """Tests for sanitize_env_value."""

    @pytest.mark.parametrize("raw,expected", [
        ('"value"', "value"),
        ("'value'", "value"),
        ("  value  ", "value"),
        ('"value', "value"),
        ("value'", "value"),
        ("", ""),
    ])
    def test_sanitize(self, raw, expected):
        """Test quote and whitespace stripping."""
        assert sanitize_env_value(raw) == expected

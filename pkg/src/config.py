"""Configuration management module."""

import os
import yaml
from pathlib import Path
from typing import Callable, Dict, Optional
from dotenv import load_dotenv
from .models import Config, OptimizerConfig, SweepConfig
from .range_utils import make_bond_grid
import logging

logger = logging.getLogger(__name__)

ENV_PREFIX = "VQE_LAB_"


def sanitize_env_value(value: str) -> str:
    """
    Sanitize environment variable value by removing surrounding quotes and whitespace.

    Args:
        value: The raw environment variable value

    Returns:
        The sanitized value with quotes and whitespace removed
    """
    if not value:
        return ""

    value = value.strip()

    # Remove quotes from both ends if present
    if (value.startswith('"') and value.endswith('"')) or (value.startswith("'") and value.endswith("'")):
        value = value[1:-1].strip()
    # Also handle cases where only one end has a quote
    elif value.startswith('"') or value.startswith("'"):
        value = value[1:].strip()
    elif value.endswith('"') or value.endswith("'"):
        value = value[:-1].strip()

    return value


def _positive_int(name: str, raw: str) -> int:
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"{name} must be an integer, got {raw!r}")
    if value < 1:
        raise ValueError(f"{name} must be >= 1, got {value}")
    return value


def _nonnegative_int(name: str, raw: str) -> int:
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"{name} must be an integer, got {raw!r}")
    if value < 0:
        raise ValueError(f"{name} must be >= 0, got {value}")
    return value


class ConfigManager:
    """Manages application configuration from YAML and environment variables."""

    def __init__(self, config_path: str = "config.yaml", env_path: str = ".env"):
        """
        Initialize configuration manager.

        Args:
            config_path: Path to config.yaml file
            env_path: Path to .env file
        """
        self.config_path = Path(config_path)
        self.env_path = Path(env_path)

        if self.env_path.exists():
            load_dotenv(self.env_path)
            logger.info(f"Successfully loaded .env file from {self.env_path}")
        else:
            logger.debug(f".env file not found at {self.env_path}, using environment variables from system")

        self.config = self._load_config()
        self._apply_env_overrides()

    def _load_config(self) -> Config:
        """Load configuration from YAML file."""
        if not self.config_path.exists():
            logger.warning(f"Config file not found at {self.config_path}, using defaults")
            return Config()

        try:
            with open(self.config_path, 'r', encoding='utf-8') as f:
                config_dict = yaml.safe_load(f) or {}

            logger.info(f"Loaded configuration from {self.config_path}")
            return Config(**config_dict)
        except Exception as e:
            logger.error(f"Failed to load config file: {e}")
            raise

    def _apply_env_overrides(self):
        """Apply VQE_LAB_* environment overrides on top of the YAML values."""
        overrides: Dict[str, Callable[[str], None]] = {
            "HAMILTONIAN_FILE": lambda v: setattr(self.config, "hamiltonian_file", v),
            "OUTPUT_DIR": lambda v: setattr(self.config, "output_dir", v),
            "WORKERS": lambda v: setattr(self.config.sweep, "workers", _positive_int(f"{ENV_PREFIX}WORKERS", v)),
            "MASTER_SEED": lambda v: setattr(
                self.config.sweep, "master_seed", _nonnegative_int(f"{ENV_PREFIX}MASTER_SEED", v)
            ),
        }
        for suffix, apply in overrides.items():
            raw = os.getenv(ENV_PREFIX + suffix)
            if raw is None:
                continue
            value = sanitize_env_value(raw)
            if not value:
                continue
            apply(value)
            logger.info(f"Applied environment override {ENV_PREFIX}{suffix}={value}")

    def get_config(self) -> Config:
        """Get the loaded configuration object."""
        return self.config

    def get_optimizer_config(self, seed: int = 0) -> OptimizerConfig:
        """Optimizer settings from config as an OptimizerConfig."""
        settings = self.config.optimizer
        return OptimizerConfig(
            learning_rate=settings.learning_rate,
            tolerance=settings.tolerance,
            max_iterations=settings.max_iterations,
            gradient_method=settings.gradient_method,
            seed=seed,
        )

    def get_sweep_config(self, **overrides) -> SweepConfig:
        """
        Sweep settings from config; keyword overrides (e.g. from CLI flags) win.

        ``None`` overrides are ignored.
        """
        sweep = self.config.sweep
        bounds = self.config.bounds
        values = {
            "templates": list(sweep.templates),
            "depth_start": sweep.depth_start,
            "depth_stop": sweep.depth_stop,
            "depth_caps": dict(sweep.depth_caps),
            "trials": sweep.trials,
            "bond_grid": make_bond_grid(sweep.bond_start, sweep.bond_stop, sweep.bond_step),
            "optimizer": self.get_optimizer_config(),
            "master_seed": sweep.master_seed,
            "hamiltonian_file": self.config.hamiltonian_file,
            "output_dir": self.config.output_dir,
            "workers": sweep.workers,
            "overwrite": sweep.overwrite,
            "accept_factor": bounds.accept_factor,
            "d": bounds.d,
            "k": bounds.k,
            "eps": bounds.eps,
            "reference_bond": bounds.reference_bond,
        }
        values.update({key: value for key, value in overrides.items() if value is not None})
        return SweepConfig(**values)

    def reference_bond(self) -> Optional[float]:
        return self.config.bounds.reference_bond

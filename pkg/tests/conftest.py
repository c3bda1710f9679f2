"""Pytest configuration and fixtures."""

import pytest
import os
from pathlib import Path
import tempfile
import yaml

from src.hamiltonian import load_hamiltonians, write_hamiltonians
from src.models import Config, MolecularHamiltonianSet, OptimizerConfig, PauliSum

REPO_ROOT = Path(__file__).resolve().parent.parent
COMMITTED_H2_FILE = REPO_ROOT / "data" / "h2_sto3g_parity.txt"
DEFAULT_BOND_GRID = [round(0.3 + 0.2 * i, 10) for i in range(10)]


@pytest.fixture
def temp_dir():
    """Create a temporary directory for tests."""
    with tempfile.TemporaryDirectory() as tmpdir:
        yield Path(tmpdir)


@pytest.fixture
def sample_config_dict(temp_dir):
    """Sample configuration dictionary."""
    return {
        "debug": False,
        "hamiltonian_file": str(temp_dir / "h.txt"),
        "output_dir": str(temp_dir / "results"),
        "optimizer": {
            "learning_rate": 0.3,
            "tolerance": 1e-7,
            "max_iterations": 200,
            "gradient_method": "adjoint"
        },
        "sweep": {
            "templates": [2, 4],
            "depth_start": 1,
            "depth_stop": 3,
            "depth_caps": {1: 10},
            "trials": 2,
            "bond_start": 0.3,
            "bond_stop": 0.5,
            "bond_step": 0.2,
            "master_seed": 7,
            "workers": 1,
            "overwrite": False
        },
        "bounds": {
            "d": 2,
            "k": 2,
            "eps": 0.01,
            "reference_bond": 0.8,
            "accept_factor": 2.0
        }
    }


@pytest.fixture
def sample_config(sample_config_dict):
    """Sample Config object."""
    return Config(**sample_config_dict)


@pytest.fixture
def config_file(temp_dir, sample_config_dict):
    """Create a temporary config.yaml file."""
    config_path = temp_dir / "config.yaml"
    with open(config_path, 'w') as f:
        yaml.dump(sample_config_dict, f)
    return config_path


@pytest.fixture
def env_file(temp_dir):
    """Create a temporary .env file."""
    env_path = temp_dir / ".env"
    with open(env_path, 'w') as f:
        f.write("VQE_LAB_WORKERS=\"3\"\n")
        f.write("VQE_LAB_MASTER_SEED=11\n")
    return env_path


def constant_set(values, num_qubits=4):
    """Hamiltonian set of constant operators c * I keyed by bond length."""
    identity = "I" * num_qubits
    return MolecularHamiltonianSet(
        molecule="CONST",
        basis="none",
        mapping="none",
        num_qubits=num_qubits,
        source="test constants",
        hamiltonians={
            bond: PauliSum.from_pairs([(identity, value)], num_qubits=num_qubits)
            for bond, value in values.items()
        },
    )


@pytest.fixture
def constant_hamiltonians():
    """{0.3: 2 I, 0.5: 1 I} on four qubits."""
    return constant_set({0.3: 2.0, 0.5: 1.0})


@pytest.fixture
def constant_hamiltonian_file(temp_dir, constant_hamiltonians):
    """Coefficient file holding the constant Hamiltonians."""
    return write_hamiltonians(constant_hamiltonians, temp_dir / "h.txt")


@pytest.fixture
def fast_optimizer():
    """Optimizer settings small enough for unit tests."""
    return OptimizerConfig(learning_rate=0.4, tolerance=1e-8, max_iterations=300, seed=3)


@pytest.fixture(scope="session")
def h2_file():
    """Committed H2 / STO-3G parity coefficient file."""
    return COMMITTED_H2_FILE


@pytest.fixture(scope="session")
def h2_set(h2_file):
    """Loaded H2 Hamiltonian set."""
    return load_hamiltonians(h2_file)


@pytest.fixture(autouse=True)
def reset_env():
    """Reset environment variables after each test."""
    original_env = os.environ.copy()
    for key in list(os.environ):
        if key.startswith("VQE_LAB_"):
            del os.environ[key]
    yield
    os.environ.clear()
    os.environ.update(original_env)

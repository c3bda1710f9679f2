"""
VQE cost, exact gradients and plain gradient descent.
"""

import logging
import math
from typing import Callable, Optional, Sequence, Tuple

import numpy as np

from .exceptions import DataValidationError
from .hamiltonian import to_dense
from .models import AnsatzCircuit, OptimizerConfig, PauliSum, VqeResult
from .statevector import (
    apply_gate_raw,
    gate_angle,
    apply_circuit,
    apply_generator,
    expectation_pauli_sum,
    zero_state,
)

logger = logging.getLogger(__name__)

PROGRESS_LOG_INTERVAL = 100
SHIFT = math.pi / 2


def _check_compatible(circuit: AnsatzCircuit, h: PauliSum, params: Sequence[float]) -> None:
    if len(params) != circuit.num_params:
        raise DataValidationError(f"Expected {circuit.num_params} parameters, got {len(params)}")
    if h.num_qubits != circuit.num_qubits:
        raise DataValidationError(f"Hamiltonian acts on {h.num_qubits} qubits, circuit on {circuit.num_qubits}")


def cost(circuit: AnsatzCircuit, h: PauliSum, params: Sequence[float]) -> float:
    """<0|U(theta)^H H U(theta)|0> in Hartree."""
    _check_compatible(circuit, h, params)
    return expectation_pauli_sum(apply_circuit(circuit, params), h)


def gradient(circuit: AnsatzCircuit, h: PauliSum, params: Sequence[float]) -> np.ndarray:
    """Parameter-shift gradient: g_j = [E(theta_j + pi/2) - E(theta_j - pi/2)] / 2."""
    _check_compatible(circuit, h, params)
    theta = np.asarray(params, dtype=np.float64)
    grad = np.zeros(circuit.num_params, dtype=np.float64)
    for j in range(circuit.num_params):
        shifted = theta.copy()
        shifted[j] = theta[j] + SHIFT
        plus = cost(circuit, h, shifted)
        shifted[j] = theta[j] - SHIFT
        minus = cost(circuit, h, shifted)
        grad[j] = 0.5 * (plus - minus)
    return grad


def _adjoint_value_and_gradient(
    circuit: AnsatzCircuit, dense_h: np.ndarray, params: Sequence[float]
) -> Tuple[float, np.ndarray]:
    n = circuit.num_qubits
    phi = zero_state(n).amplitudes
    for gate in circuit.gates:
        phi = apply_gate_raw(phi, gate.kind, gate.qubits, gate_angle(gate, params), n)
    lam = dense_h @ phi
    energy = float(np.vdot(phi, lam).real)

    grad = np.zeros(circuit.num_params, dtype=np.float64)
    for gate in reversed(circuit.gates):
        angle = gate_angle(gate, params)
        if gate.param_slot is not None:
            # dE/dtheta = 2 Re <lam| (-i/2) P |phi> = Im <lam|P|phi>
            grad[gate.param_slot] = float(np.vdot(lam, apply_generator(phi, gate.kind, gate.qubits[0], n)).imag)
        phi = apply_gate_raw(phi, gate.kind, gate.qubits, -angle, n)
        lam = apply_gate_raw(lam, gate.kind, gate.qubits, -angle, n)
    return energy, grad


def adjoint_gradient(circuit: AnsatzCircuit, h: PauliSum, params: Sequence[float]) -> np.ndarray:
    """Reverse-mode gradient; equal to the parameter-shift gradient up to rounding."""
    _check_compatible(circuit, h, params)
    _, grad = _adjoint_value_and_gradient(circuit, to_dense(h), params)
    return grad


def _value_and_gradient_fn(
    circuit: AnsatzCircuit, h: PauliSum, method: str
) -> Callable[[np.ndarray], Tuple[float, np.ndarray]]:
    if method == "adjoint":
        dense_h = to_dense(h)
        return lambda theta: _adjoint_value_and_gradient(circuit, dense_h, theta)
    return lambda theta: (cost(circuit, h, theta), gradient(circuit, h, theta))


def initial_parameters(num_params: int, seed: int) -> np.ndarray:
    """Uniform [0, 2pi) start drawn from a seeded generator."""
    rng = np.random.default_rng(seed)
    return rng.uniform(0.0, 2.0 * math.pi, size=num_params)


def minimize(
    circuit: AnsatzCircuit,
    h: PauliSum,
    config: Optional[OptimizerConfig] = None,
    initial_params: Optional[Sequence[float]] = None,
) -> VqeResult:
    """
    Minimize the VQE cost by theta <- theta - eta * grad E.

    Stops when |E_t - E_(t-1)| < tolerance (converged) or after max_iterations
    updates (not converged, not an error).
    """
    config = config or OptimizerConfig()
    if h.num_qubits != circuit.num_qubits:
        raise DataValidationError(f"Hamiltonian acts on {h.num_qubits} qubits, circuit on {circuit.num_qubits}")

    if initial_params is None:
        theta = initial_parameters(circuit.num_params, config.seed)
    else:
        theta = np.asarray(initial_params, dtype=np.float64).copy()
        _check_compatible(circuit, h, theta)

    value_and_grad = _value_and_gradient_fn(circuit, h, config.gradient_method)
    energy, grad = value_and_grad(theta)
    trace = [energy]
    converged = False
    iterations = 0

    while iterations < config.max_iterations:
        iterations += 1
        theta = theta - config.learning_rate * grad
        new_energy, grad = value_and_grad(theta)
        trace.append(new_energy)
        change = abs(new_energy - energy)
        energy = new_energy
        if iterations % PROGRESS_LOG_INTERVAL == 0:
            logger.debug(f"iteration {iterations}: E = {energy:.10f}, |dE| = {change:.3e}")
        if change < config.tolerance:
            converged = True
            break

    if not converged:
        logger.warning(
            f"Gradient descent hit the iteration cap ({config.max_iterations}) "
            f"without reaching tolerance {config.tolerance:g}"
        )

    return VqeResult(
        final_energy=cost(circuit, h, theta),
        final_params=theta.tolist(),
        iterations_used=iterations,
        converged=converged,
        energy_trace=trace,
    )

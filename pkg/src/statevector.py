"""
Dense statevector simulation of parameterized circuits.

Conventions:
- qubit 0 is the least significant bit of the amplitude index;
- in a Pauli word the rightmost letter acts on qubit 0;
- rotations are R_P(theta) = exp(-i theta P / 2).
"""

import logging
from functools import lru_cache
from typing import Optional, Sequence, Tuple

import numpy as np

from .exceptions import DataValidationError
from .models import AnsatzCircuit, Gate, GateKind, PAULI_ALPHABET, PauliSum

logger = logging.getLogger(__name__)

NORM_TOLERANCE = 1e-10

PAULI_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)
HADAMARD = np.array([[1, 1], [1, -1]], dtype=np.complex128) / np.sqrt(2.0)

_GENERATORS = {GateKind.RX: PAULI_X, GateKind.RY: PAULI_Y, GateKind.RZ: PAULI_Z}


class StateVector:
    """
    Immutable dense statevector over ``num_qubits`` qubits.

    Amplitudes are stored as a read-only complex128 array; every operation
    returns a fresh StateVector.
    """

    def __init__(self, num_qubits: int, amplitudes: Optional[Sequence[complex]] = None):
        if num_qubits < 1:
            raise DataValidationError(f"num_qubits must be >= 1, got {num_qubits}")
        dim = 2 ** num_qubits
        if amplitudes is None:
            data = np.zeros(dim, dtype=np.complex128)
            data[0] = 1.0
        else:
            data = np.array(amplitudes, dtype=np.complex128).reshape(-1)
            if data.shape[0] != dim:
                raise DataValidationError(
                    f"Expected {dim} amplitudes for {num_qubits} qubits, got {data.shape[0]}"
                )
        data.flags.writeable = False
        self.num_qubits = num_qubits
        self._data = data

    @classmethod
    def zero(cls, num_qubits: int) -> "StateVector":
        """Return |0...0>."""
        return cls(num_qubits)

    @property
    def amplitudes(self) -> np.ndarray:
        return self._data

    @property
    def dim(self) -> int:
        return self._data.shape[0]

    def norm_squared(self) -> float:
        return float(np.vdot(self._data, self._data).real)

    def __repr__(self) -> str:
        return f"StateVector(qubits={self.num_qubits}, dim={self.dim})"


def zero_state(num_qubits: int) -> StateVector:
    return StateVector.zero(num_qubits)


@lru_cache(maxsize=None)
def _cnot_permutation(num_qubits: int, control: int, target: int) -> np.ndarray:
    index = np.arange(2 ** num_qubits)
    return np.where((index >> control) & 1, index ^ (1 << target), index)


@lru_cache(maxsize=None)
def _cz_phases(num_qubits: int, a: int, b: int) -> np.ndarray:
    index = np.arange(2 ** num_qubits)
    both = ((index >> a) & 1) & ((index >> b) & 1)
    return np.where(both == 1, -1.0, 1.0).astype(np.complex128)


def rotation_matrix(kind: GateKind, angle: float) -> np.ndarray:
    """2x2 matrix of exp(-i angle P / 2)."""
    c = np.cos(angle / 2.0)
    s = np.sin(angle / 2.0)
    if kind is GateKind.RX:
        return np.array([[c, -1j * s], [-1j * s, c]], dtype=np.complex128)
    if kind is GateKind.RY:
        return np.array([[c, -s], [s, c]], dtype=np.complex128)
    if kind is GateKind.RZ:
        return np.array([[np.exp(-0.5j * angle), 0], [0, np.exp(0.5j * angle)]], dtype=np.complex128)
    raise DataValidationError(f"{kind.value} is not a rotation")


def _apply_single(amps: np.ndarray, matrix: np.ndarray, qubit: int, num_qubits: int) -> np.ndarray:
    lo = 1 << qubit
    hi = 1 << (num_qubits - 1 - qubit)
    return (matrix @ amps.reshape(hi, 2, lo)).reshape(-1)


def apply_gate_raw(amps: np.ndarray, kind: GateKind, qubits: Tuple[int, ...], angle: float, num_qubits: int) -> np.ndarray:
    """Apply one gate to a raw amplitude array and return a new array."""
    if kind.is_rotation:
        return _apply_single(amps, rotation_matrix(kind, angle), qubits[0], num_qubits)
    if kind is GateKind.CNOT:
        return amps[_cnot_permutation(num_qubits, qubits[0], qubits[1])]
    if kind is GateKind.CZ:
        return amps * _cz_phases(num_qubits, qubits[0], qubits[1])
    if kind is GateKind.H:
        return _apply_single(amps, HADAMARD, qubits[0], num_qubits)
    if kind is GateKind.X:
        return _apply_single(amps, PAULI_X, qubits[0], num_qubits)
    raise DataValidationError(f"Unsupported gate kind {kind}")


def gate_angle(gate: Gate, params: Sequence[float]) -> float:
    if gate.param_slot is None:
        return 0.0
    if gate.param_slot >= len(params):
        raise DataValidationError(
            f"Missing parameter for {gate.kind.value}: slot {gate.param_slot}, {len(params)} params given"
        )
    return float(params[gate.param_slot])


def _check_qubits(gate: Gate, num_qubits: int) -> None:
    for q in gate.qubits:
        if q >= num_qubits:
            raise DataValidationError(f"Qubit index {q} out of range for {num_qubits} qubits")


def apply_gate(state: StateVector, gate: Gate, params: Sequence[float] = (), inverse: bool = False) -> StateVector:
    """
    Apply a gate and return the new state.

    Args:
        state: Input state (left untouched)
        gate: Gate to apply
        params: Parameter vector indexed by ``gate.param_slot``
        inverse: Apply the adjoint of the gate instead

    Raises:
        DataValidationError: If a qubit is out of range or a parameter is missing
    """
    _check_qubits(gate, state.num_qubits)
    angle = gate_angle(gate, params)
    if inverse:
        angle = -angle
    amps = apply_gate_raw(state.amplitudes, gate.kind, gate.qubits, angle, state.num_qubits)
    return StateVector(state.num_qubits, amps)


def apply_circuit(circuit: AnsatzCircuit, params: Sequence[float], initial_state: Optional[StateVector] = None) -> StateVector:
    """Return U(theta)|psi0>, with |psi0> = |0...0> unless given."""
    if len(params) != circuit.num_params:
        raise DataValidationError(f"Expected {circuit.num_params} parameters, got {len(params)}")
    if initial_state is None:
        amps = zero_state(circuit.num_qubits).amplitudes
    else:
        if initial_state.num_qubits != circuit.num_qubits:
            raise DataValidationError(
                f"Initial state has {initial_state.num_qubits} qubits, circuit has {circuit.num_qubits}"
            )
        amps = initial_state.amplitudes
    n = circuit.num_qubits
    for gate in circuit.gates:
        amps = apply_gate_raw(amps, gate.kind, gate.qubits, gate_angle(gate, params), n)
    return StateVector(n, amps)


@lru_cache(maxsize=4096)
def _pauli_masks(pauli: str) -> Tuple[int, int, int]:
    """Return (flip mask, phase mask, number of Y letters) of a Pauli word."""
    num_qubits = len(pauli)
    flip = 0
    phase = 0
    n_y = 0
    for position, letter in enumerate(pauli):
        qubit = num_qubits - 1 - position
        if letter in "XY":
            flip |= 1 << qubit
        if letter in "YZ":
            phase |= 1 << qubit
        if letter == "Y":
            n_y += 1
    return flip, phase, n_y


@lru_cache(maxsize=64)
def _parity_signs(num_qubits: int, mask: int) -> np.ndarray:
    index = np.arange(2 ** num_qubits)
    bits = index & mask
    parity = np.zeros_like(index)
    while np.any(bits):
        parity ^= bits & 1
        bits = bits >> 1
    return 1.0 - 2.0 * parity


def apply_pauli_string(amps: np.ndarray, pauli: str) -> np.ndarray:
    """Return P|psi> for a raw amplitude array."""
    num_qubits = len(pauli)
    flip, phase, n_y = _pauli_masks(pauli)
    out = amps * _parity_signs(num_qubits, phase) if phase else amps.copy()
    if n_y % 4:
        out = out * (1j ** (n_y % 4))
    if flip:
        index = np.arange(amps.shape[0])
        out = out[index ^ flip]
    return out


def _validate_pauli(pauli: str, num_qubits: int) -> None:
    if len(pauli) != num_qubits:
        raise DataValidationError(f"Pauli string {pauli!r} has length {len(pauli)}, state has {num_qubits} qubits")
    bad = set(pauli) - PAULI_ALPHABET
    if bad:
        raise DataValidationError(f"Invalid Pauli character(s) {sorted(bad)} in {pauli!r}")


def expectation_pauli_string(state: StateVector, pauli: str) -> float:
    """<psi|P|psi> for a Pauli word."""
    _validate_pauli(pauli, state.num_qubits)
    amps = state.amplitudes
    return float(np.vdot(amps, apply_pauli_string(amps, pauli)).real)


def expectation_pauli_sum(state: StateVector, h: PauliSum) -> float:
    """Energy sum_i c_i <psi|P_i|psi> in Hartree."""
    if h.num_qubits != state.num_qubits:
        raise DataValidationError(f"Hamiltonian acts on {h.num_qubits} qubits, state has {state.num_qubits}")
    amps = state.amplitudes
    energy = 0.0
    for term in h.terms:
        energy += term.coefficient * float(np.vdot(amps, apply_pauli_string(amps, term.string)).real)
    return energy


def generator_matrix(kind: GateKind) -> np.ndarray:
    """Pauli generator P of a rotation R_P(theta)."""
    return _GENERATORS[kind]


def apply_generator(amps: np.ndarray, kind: GateKind, qubit: int, num_qubits: int) -> np.ndarray:
    return _apply_single(amps, _GENERATORS[kind], qubit, num_qubits)

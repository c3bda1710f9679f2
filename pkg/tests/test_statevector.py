"""Tests for statevector module."""

import math

import numpy as np
import pytest

from src.exceptions import DataValidationError
from src.models import AnsatzCircuit, Gate, GateKind, PauliSum
from src.statevector import (
    StateVector,
    apply_circuit,
    apply_gate,
    expectation_pauli_string,
    expectation_pauli_sum,
    zero_state,
)

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
H = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
P0 = np.array([[1, 0], [0, 0]], dtype=complex)
P1 = np.array([[0, 0], [0, 1]], dtype=complex)
LETTERS = {"I": I2, "X": X, "Y": Y, "Z": Z}


def embed(ops, n):
    """Kronecker product with qubit n-1 leftmost; ``ops`` maps qubit -> 2x2."""
    out = np.ones((1, 1), dtype=complex)
    for q in reversed(range(n)):
        out = np.kron(out, ops.get(q, I2))
    return out


def oracle_gate(kind, qubits, angle, n):
    if kind in (GateKind.RX, GateKind.RY, GateKind.RZ):
        generator = {GateKind.RX: X, GateKind.RY: Y, GateKind.RZ: Z}[kind]
        local = math.cos(angle / 2) * I2 - 1j * math.sin(angle / 2) * generator
        return embed({qubits[0]: local}, n)
    if kind is GateKind.H:
        return embed({qubits[0]: H}, n)
    if kind is GateKind.X:
        return embed({qubits[0]: X}, n)
    c, t = qubits
    if kind is GateKind.CNOT:
        return embed({c: P0}, n) + embed({c: P1, t: X}, n)
    return embed({c: P0}, n) + embed({c: P1, t: Z}, n)


def oracle_pauli(word):
    out = np.ones((1, 1), dtype=complex)
    for letter in word:
        out = np.kron(out, LETTERS[letter])
    return out


def random_circuit(rng, n, num_gates):
    kinds = [GateKind.RX, GateKind.RY, GateKind.RZ, GateKind.H, GateKind.X]
    if n > 1:
        kinds += [GateKind.CNOT, GateKind.CZ]
    gates = []
    slot = 0
    for _ in range(num_gates):
        kind = kinds[rng.integers(len(kinds))]
        if kind.arity == 2:
            qubits = tuple(int(q) for q in rng.choice(n, size=2, replace=False))
        else:
            qubits = (int(rng.integers(n)),)
        if kind.is_rotation:
            gates.append(Gate(kind=kind, qubits=qubits, param_slot=slot))
            slot += 1
        else:
            gates.append(Gate(kind=kind, qubits=qubits))
    return AnsatzCircuit.from_gates(gates, n)


def random_state(rng, n):
    amps = rng.normal(size=2 ** n) + 1j * rng.normal(size=2 ** n)
    return StateVector(n, amps / np.linalg.norm(amps))


class TestStateVector:
    """Tests for StateVector class."""

    def test_zero_state(self):
        """Test |0...0> construction."""
        state = zero_state(3)
        assert state.dim == 8
        assert state.amplitudes[0] == 1
        assert np.count_nonzero(state.amplitudes) == 1

    def test_amplitudes_read_only(self):
        """Test that amplitudes cannot be mutated in place."""
        state = zero_state(2)
        with pytest.raises(ValueError):
            state.amplitudes[0] = 0

    def test_wrong_amplitude_count(self):
        """Test rejection of a mis-sized amplitude vector."""
        with pytest.raises(DataValidationError, match="Expected 4 amplitudes"):
            StateVector(2, [1, 0])

    def test_repr(self):
        """Test StateVector string representation."""
        assert repr(zero_state(2)) == "StateVector(qubits=2, dim=4)"


class TestApplyGate:
    """Tests for single gate application."""

    def test_x_flips_qubit_zero(self):
        """Test X on qubit 0 of |00> gives |01> (index 1)."""
        state = apply_gate(zero_state(2), Gate(kind=GateKind.X, qubits=(0,)))
        assert state.amplitudes[1] == pytest.approx(1.0)
        assert abs(state.amplitudes[0]) == 0

    def test_ry_pi_on_zero(self):
        """Test RY(pi)|0> = |1>."""
        state = apply_gate(zero_state(1), Gate(kind=GateKind.RY, qubits=(0,), param_slot=0), [math.pi])
        assert state.amplitudes[1] == pytest.approx(1.0, abs=1e-15)
        assert abs(state.amplitudes[0]) < 1e-15

    def test_cnot_control_first(self):
        """Test CNOT(0 -> 1) maps |01> to |11>."""
        start = StateVector(2, [0, 1, 0, 0])
        state = apply_gate(start, Gate(kind=GateKind.CNOT, qubits=(0, 1)))
        assert state.amplitudes[3] == pytest.approx(1.0)

    def test_input_state_untouched(self):
        """Test that gate application returns a fresh state."""
        start = zero_state(1)
        apply_gate(start, Gate(kind=GateKind.X, qubits=(0,)))
        assert start.amplitudes[0] == 1

    def test_qubit_out_of_range(self):
        """Test gate on a missing qubit."""
        with pytest.raises(DataValidationError, match="out of range"):
            apply_gate(zero_state(2), Gate(kind=GateKind.H, qubits=(2,)))

    def test_missing_parameter(self):
        """Test rotation whose slot is past the parameter vector."""
        with pytest.raises(DataValidationError, match="Missing parameter"):
            apply_gate(zero_state(1), Gate(kind=GateKind.RX, qubits=(0,), param_slot=1), [0.1])

    @pytest.mark.parametrize("kind", list(GateKind))
    def test_norm_preserved(self, kind):
        """Test every gate kind preserves the norm."""
        rng = np.random.default_rng(5)
        state = random_state(rng, 3)
        qubits = (2, 0) if kind.arity == 2 else (1,)
        gate = Gate(kind=kind, qubits=qubits, param_slot=0 if kind.is_rotation else None)
        out = apply_gate(state, gate, [rng.uniform(0, 2 * math.pi)])
        assert out.norm_squared() == pytest.approx(1.0, abs=1e-10)

    @pytest.mark.parametrize("kind", [GateKind.RX, GateKind.RY, GateKind.RZ, GateKind.CNOT, GateKind.CZ, GateKind.H])
    def test_inverse_undoes_gate(self, kind):
        """Test apply_gate(inverse=True) undoes apply_gate."""
        rng = np.random.default_rng(9)
        state = random_state(rng, 3)
        qubits = (1, 2) if kind.arity == 2 else (0,)
        gate = Gate(kind=kind, qubits=qubits, param_slot=0 if kind.is_rotation else None)
        params = [1.234]
        back = apply_gate(apply_gate(state, gate, params), gate, params, inverse=True)
        np.testing.assert_allclose(back.amplitudes, state.amplitudes, atol=1e-12)


class TestCircuitOracle:
    """Dense Kronecker-product oracle comparisons."""

    def test_three_qubit_twelve_gates(self):
        """Test a 12-gate 3-qubit circuit against the dense product."""
        rng = np.random.default_rng(12)
        circuit = random_circuit(rng, 3, 12)
        params = rng.uniform(0, 2 * math.pi, size=circuit.num_params)
        expected = np.zeros(8, dtype=complex)
        expected[0] = 1
        for gate in circuit.gates:
            angle = params[gate.param_slot] if gate.param_slot is not None else 0.0
            expected = oracle_gate(gate.kind, gate.qubits, angle, 3) @ expected
        np.testing.assert_allclose(apply_circuit(circuit, params).amplitudes, expected, atol=1e-10, rtol=0)

    def test_two_hundred_random_circuits(self):
        """Test 200 random circuits on up to 3 qubits with up to 20 gates."""
        rng = np.random.default_rng(2024)
        for _ in range(200):
            n = int(rng.integers(1, 4))
            circuit = random_circuit(rng, n, int(rng.integers(1, 21)))
            params = rng.uniform(0, 2 * math.pi, size=circuit.num_params)
            expected = np.zeros(2 ** n, dtype=complex)
            expected[0] = 1
            for gate in circuit.gates:
                angle = params[gate.param_slot] if gate.param_slot is not None else 0.0
                expected = oracle_gate(gate.kind, gate.qubits, angle, n) @ expected
            actual = apply_circuit(circuit, params).amplitudes
            assert np.max(np.abs(actual - expected)) < 1e-10

    def test_initial_state(self):
        """Test apply_circuit from a given initial state."""
        circuit = AnsatzCircuit.from_gates([Gate(kind=GateKind.X, qubits=(1,))], 2)
        start = StateVector(2, [0, 1, 0, 0])
        out = apply_circuit(circuit, [], initial_state=start)
        assert out.amplitudes[3] == pytest.approx(1.0)

    def test_wrong_param_count(self):
        """Test parameter vector length validation."""
        circuit = AnsatzCircuit.from_gates([Gate(kind=GateKind.RX, qubits=(0,), param_slot=0)], 1)
        with pytest.raises(DataValidationError, match="Expected 1 parameters"):
            apply_circuit(circuit, [0.1, 0.2])


class TestExpectation:
    """Tests for Pauli expectations."""

    def test_z_on_zero(self):
        """Test <0|Z|0> = 1."""
        assert expectation_pauli_string(zero_state(1), "Z") == 1.0

    def test_identity(self):
        """Test <00|II|00> = 1."""
        assert expectation_pauli_string(zero_state(2), "II") == 1.0

    def test_xy_random_state(self):
        """Test <psi|XY|psi> against the dense sandwich."""
        rng = np.random.default_rng(1)
        state = random_state(rng, 2)
        psi = state.amplitudes
        expected = np.vdot(psi, np.kron(X, Y) @ psi).real
        assert expectation_pauli_string(state, "XY") == pytest.approx(expected, abs=1e-10)

    def test_constant_sum(self):
        """Test h = 0.5 I on |0>."""
        h = PauliSum.from_pairs([("I", 0.5)])
        assert expectation_pauli_sum(zero_state(1), h) == pytest.approx(0.5)

    def test_opposite_eigenvalues(self):
        """Test Z0 + Z1 on |01> is zero."""
        h = PauliSum.from_pairs([("IZ", 1.0), ("ZI", 1.0)])
        assert expectation_pauli_sum(StateVector(2, [0, 1, 0, 0]), h) == pytest.approx(0.0)

    def test_two_hundred_random_sums(self):
        """Test 200 random Pauli sums against dense sandwiches."""
        rng = np.random.default_rng(77)
        for _ in range(200):
            n = int(rng.integers(1, 4))
            words = {"".join(rng.choice(list("IXYZ"), size=n)) for _ in range(int(rng.integers(1, 6)))}
            pairs = [(w, float(rng.normal())) for w in sorted(words)]
            h = PauliSum.from_pairs(pairs)
            state = random_state(rng, n)
            dense = sum(c * oracle_pauli(w) for w, c in pairs)
            expected = np.vdot(state.amplitudes, dense @ state.amplitudes).real
            assert abs(expectation_pauli_sum(state, h) - expected) < 1e-10

    def test_h2_sum_matches_dense(self, h2_set):
        """Test the 4-qubit H2 sum on a random state."""
        h = h2_set.hamiltonians[h2_set.bond_lengths()[2]]
        state = random_state(np.random.default_rng(4), 4)
        dense = sum(t.coefficient * oracle_pauli(t.string) for t in h.terms)
        expected = np.vdot(state.amplitudes, dense @ state.amplitudes).real
        assert expectation_pauli_sum(state, h) == pytest.approx(expected, abs=1e-10)

    def test_expectation_is_real_for_hermitian_words(self):
        """Test that every Pauli word gives a value in [-1, 1]."""
        rng = np.random.default_rng(8)
        state = random_state(rng, 3)
        for word in ("XYZ", "YYI", "ZIX", "III"):
            value = expectation_pauli_string(state, word)
            assert -1.0 - 1e-12 <= value <= 1.0 + 1e-12

    def test_length_mismatch(self):
        """Test Pauli string of the wrong length."""
        with pytest.raises(DataValidationError, match="has length 1"):
            expectation_pauli_string(zero_state(2), "Z")

    def test_invalid_letter(self):
        """Test Pauli string with a foreign letter."""
        with pytest.raises(DataValidationError, match="Invalid Pauli character"):
            expectation_pauli_string(zero_state(2), "ZQ")

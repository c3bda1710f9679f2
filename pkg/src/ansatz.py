"""
Hardware-efficient ansatz templates on four qubits.

Gate layouts (version 1, reconstructed so that the trainable-gate counts are
12n+12, 8n+8, 16n+8 and 8n for templates 1-4):

- Template 1: RX,RY,RZ on every qubit; block = CNOT ring 0->1->2->3->0, then RX,RY,RZ on every qubit.
- Template 2: RY,RZ on every qubit; block = CNOT chain 0->1->2->3, then RY,RZ on every qubit.
- Template 3: RY,RZ on every qubit; block = CNOT chain, RY,RZ on every qubit, CNOT chain, RY,RZ on every qubit.
- Template 4: no initial block; block = RY,RZ on every qubit, then CNOT chain.

Parameter slots are assigned in gate-application order.
"""

import logging
from typing import Dict, List, Tuple

from .exceptions import DataValidationError
from .models import AnsatzCircuit, Gate, GateKind

logger = logging.getLogger(__name__)

NUM_QUBITS = 4
LAYOUT_VERSION = 1

# (per-layer, constant) coefficients of N_gt = a*n + b
TRAINABLE_FORMULAS: Dict[int, Tuple[int, int]] = {
    1: (12, 12),
    2: (8, 8),
    3: (16, 8),
    4: (8, 0),
}

TEMPLATE_DESCRIPTIONS: Dict[int, str] = {
    1: "initial RX,RY,RZ per qubit; block = CNOT ring + RX,RY,RZ per qubit",
    2: "initial RY,RZ per qubit; block = CNOT chain + RY,RZ per qubit",
    3: "initial RY,RZ per qubit; block = CNOT chain + RY,RZ per qubit + CNOT chain + RY,RZ per qubit",
    4: "block = RY,RZ per qubit + CNOT chain",
}


def _check_template(template_id: int) -> None:
    if template_id not in TRAINABLE_FORMULAS:
        raise DataValidationError(f"Unknown template id {template_id}; expected one of {sorted(TRAINABLE_FORMULAS)}")


def _check_depth(depth: int) -> None:
    if depth < 1:
        raise DataValidationError(f"Depth must be >= 1, got {depth}")


def template_description(template_id: int) -> str:
    _check_template(template_id)
    return TEMPLATE_DESCRIPTIONS[template_id]


def count_trainable(template_id: int, depth: int) -> int:
    """Number of trainable gates N_gt of a template at depth n."""
    _check_template(template_id)
    _check_depth(depth)
    per_layer, constant = TRAINABLE_FORMULAS[template_id]
    return per_layer * depth + constant


class _CircuitBuilder:
    """Accumulates gates and hands out parameter slots in order."""

    def __init__(self, num_qubits: int):
        self.num_qubits = num_qubits
        self.gates: List[Gate] = []
        self.next_slot = 0

    def rotations(self, kinds: Tuple[GateKind, ...]) -> None:
        for qubit in range(self.num_qubits):
            for kind in kinds:
                self.gates.append(Gate(kind=kind, qubits=(qubit,), param_slot=self.next_slot))
                self.next_slot += 1

    def cnot_chain(self) -> None:
        for qubit in range(self.num_qubits - 1):
            self.gates.append(Gate(kind=GateKind.CNOT, qubits=(qubit, qubit + 1)))

    def cnot_ring(self) -> None:
        self.cnot_chain()
        self.gates.append(Gate(kind=GateKind.CNOT, qubits=(self.num_qubits - 1, 0)))


_XYZ = (GateKind.RX, GateKind.RY, GateKind.RZ)
_YZ = (GateKind.RY, GateKind.RZ)


def build_circuit(template_id: int, depth: int) -> AnsatzCircuit:
    """
    Build a template circuit at depth n.

    Raises:
        DataValidationError: Unknown template or depth < 1
    """
    _check_template(template_id)
    _check_depth(depth)
    builder = _CircuitBuilder(NUM_QUBITS)

    if template_id == 1:
        builder.rotations(_XYZ)
        for _ in range(depth):
            builder.cnot_ring()
            builder.rotations(_XYZ)
    elif template_id == 2:
        builder.rotations(_YZ)
        for _ in range(depth):
            builder.cnot_chain()
            builder.rotations(_YZ)
    elif template_id == 3:
        builder.rotations(_YZ)
        for _ in range(depth):
            builder.cnot_chain()
            builder.rotations(_YZ)
            builder.cnot_chain()
            builder.rotations(_YZ)
    else:
        for _ in range(depth):
            builder.rotations(_YZ)
            builder.cnot_chain()

    circuit = AnsatzCircuit(
        template_id=template_id,
        depth=depth,
        num_qubits=NUM_QUBITS,
        gates=tuple(builder.gates),
        num_params=builder.next_slot,
    )
    logger.debug(
        f"Built template {template_id} depth {depth}: {circuit.num_gates} gates, "
        f"{circuit.num_params} trainable, {circuit.num_entangling} entangling"
    )
    return circuit


def dump_circuit(circuit: AnsatzCircuit) -> str:
    """Textual gate listing, one gate per line: ``kind qubits [slot]``."""
    lines = []
    for gate in circuit.gates:
        line = f"{gate.kind.value} {','.join(str(q) for q in gate.qubits)}"
        if gate.param_slot is not None:
            line += f" {gate.param_slot}"
        lines.append(line)
    return "\n".join(lines)

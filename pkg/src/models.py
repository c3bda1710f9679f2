"""Data models for circuits, Hamiltonians, optimizer runs, bounds and sweeps."""

import math
from enum import Enum
from typing import Dict, List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator


PAULI_ALPHABET = frozenset("IXYZ")


class GateKind(str, Enum):
    """Supported gate kinds."""

    RX = "RX"
    RY = "RY"
    RZ = "RZ"
    CNOT = "CNOT"
    CZ = "CZ"
    H = "H"
    X = "X"

    @property
    def is_rotation(self) -> bool:
        return self in (GateKind.RX, GateKind.RY, GateKind.RZ)

    @property
    def arity(self) -> int:
        return 2 if self in (GateKind.CNOT, GateKind.CZ) else 1


class Gate(BaseModel):
    """A single- or two-qubit gate, optionally bound to a parameter slot."""

    model_config = ConfigDict(frozen=True)

    kind: GateKind = Field(..., description="Gate kind")
    qubits: Tuple[int, ...] = Field(..., description="Target qubits (control first for CNOT)")
    param_slot: Optional[int] = Field(None, ge=0, description="Index into the parameter vector")

    @model_validator(mode="after")
    def _check_shape(self) -> "Gate":
        if len(self.qubits) != self.kind.arity:
            raise ValueError(f"{self.kind.value} acts on {self.kind.arity} qubit(s), got {len(self.qubits)}")
        if len(set(self.qubits)) != len(self.qubits):
            raise ValueError(f"{self.kind.value} qubit indices must be distinct: {self.qubits}")
        if any(q < 0 for q in self.qubits):
            raise ValueError(f"Negative qubit index in {self.qubits}")
        if self.kind.is_rotation and self.param_slot is None:
            raise ValueError(f"Rotation gate {self.kind.value} requires a param_slot")
        if not self.kind.is_rotation and self.param_slot is not None:
            raise ValueError(f"Gate {self.kind.value} takes no parameter")
        return self


class AnsatzCircuit(BaseModel):
    """Ordered gate list realizing U(theta) for a template at a given depth."""

    model_config = ConfigDict(frozen=True)

    template_id: Optional[int] = Field(None, description="Template 1-4, None for hand-built circuits")
    depth: int = Field(0, ge=0, description="Number of repetitions of the layer block")
    num_qubits: int = Field(..., ge=1)
    gates: Tuple[Gate, ...] = Field(default_factory=tuple)
    num_params: int = Field(0, ge=0, description="Number of trainable gates N_gt")

    @model_validator(mode="after")
    def _check_slots(self) -> "AnsatzCircuit":
        slots = [g.param_slot for g in self.gates if g.param_slot is not None]
        if len(slots) != self.num_params:
            raise ValueError(f"num_params={self.num_params} but {len(slots)} parameterized gates")
        if sorted(slots) != list(range(self.num_params)):
            raise ValueError("Parameter slots must be exactly 0..num_params-1, each used once")
        for gate in self.gates:
            if max(gate.qubits) >= self.num_qubits:
                raise ValueError(f"Gate {gate.kind.value} on {gate.qubits} exceeds {self.num_qubits} qubits")
        return self

    @classmethod
    def from_gates(cls, gates: List[Gate], num_qubits: int) -> "AnsatzCircuit":
        """Build a free-form circuit; slots must already be contiguous."""
        num_params = sum(1 for g in gates if g.param_slot is not None)
        return cls(num_qubits=num_qubits, gates=tuple(gates), num_params=num_params)

    @property
    def num_gates(self) -> int:
        return len(self.gates)

    @property
    def num_entangling(self) -> int:
        return sum(1 for g in self.gates if g.kind.arity == 2)


class PauliTerm(BaseModel):
    """Weighted Pauli string c * P."""

    model_config = ConfigDict(frozen=True)

    coefficient: float = Field(..., description="Coefficient in Hartree")
    string: str = Field(..., description="Pauli word over I, X, Y, Z; rightmost letter is qubit 0")

    @model_validator(mode="after")
    def _check_term(self) -> "PauliTerm":
        if not math.isfinite(self.coefficient):
            raise ValueError(f"Coefficient of {self.string!r} is not finite")
        if not self.string:
            raise ValueError("Pauli string must be nonempty")
        bad = set(self.string) - PAULI_ALPHABET
        if bad:
            raise ValueError(f"Invalid Pauli character(s) {sorted(bad)} in {self.string!r}")
        return self


class PauliSum(BaseModel):
    """Hamiltonian as a weighted sum of distinct Pauli strings."""

    model_config = ConfigDict(frozen=True)

    num_qubits: int = Field(..., ge=1)
    terms: Tuple[PauliTerm, ...] = Field(default_factory=tuple)

    @model_validator(mode="after")
    def _check_terms(self) -> "PauliSum":
        seen = set()
        for term in self.terms:
            if len(term.string) != self.num_qubits:
                raise ValueError(
                    f"Pauli string {term.string!r} has length {len(term.string)}, expected {self.num_qubits}"
                )
            if term.string in seen:
                raise ValueError(f"Duplicate Pauli string {term.string!r}")
            seen.add(term.string)
        return self

    @classmethod
    def from_pairs(cls, pairs: List[Tuple[str, float]], num_qubits: Optional[int] = None) -> "PauliSum":
        """Build a sum from (string, coefficient) pairs, summing duplicates."""
        merged: Dict[str, float] = {}
        for string, coefficient in pairs:
            merged[string] = merged.get(string, 0.0) + float(coefficient)
        if num_qubits is None:
            if not merged:
                raise ValueError("num_qubits is required for an empty PauliSum")
            num_qubits = len(next(iter(merged)))
        terms = tuple(PauliTerm(coefficient=c, string=s) for s, c in merged.items())
        return cls(num_qubits=num_qubits, terms=terms)

    def coefficient_of(self, string: str) -> float:
        for term in self.terms:
            if term.string == string:
                return term.coefficient
        return 0.0


class MolecularHamiltonianSet(BaseModel):
    """Pauli-sum Hamiltonians of one molecule over a set of bond lengths."""

    molecule: str = Field(..., description="Molecule label, e.g. H2")
    basis: str = Field("", description="Basis set label")
    mapping: str = Field("", description="Fermion-to-qubit mapping label")
    num_qubits: int = Field(..., ge=1)
    includes_nuclear_repulsion: bool = Field(True, description="Constant terms folded into the identity")
    source: str = Field("", description="Free-text provenance")
    hamiltonians: Dict[float, PauliSum] = Field(default_factory=dict, description="Bond length (angstrom) to Hamiltonian")

    @model_validator(mode="after")
    def _check_set(self) -> "MolecularHamiltonianSet":
        for bond, h in self.hamiltonians.items():
            if not bond > 0:
                raise ValueError(f"Bond length must be positive, got {bond}")
            if h.num_qubits != self.num_qubits:
                raise ValueError(f"Hamiltonian at {bond} acts on {h.num_qubits} qubits, expected {self.num_qubits}")
        return self

    def bond_lengths(self) -> List[float]:
        return sorted(self.hamiltonians)

    def find_bond(self, bond: float, tol: float = 1e-9) -> Optional[float]:
        """Return the stored key matching ``bond`` within ``tol``."""
        for key in self.hamiltonians:
            if abs(key - bond) <= tol:
                return key
        return None

    def __len__(self) -> int:
        return len(self.hamiltonians)


class OptimizerConfig(BaseModel):
    """Gradient-descent settings for one VQE run."""

    learning_rate: float = Field(0.4, gt=0, description="Step size eta")
    tolerance: float = Field(1e-6, gt=0, description="Stop when |E_t - E_(t-1)| < tolerance (Hartree)")
    max_iterations: int = Field(5000, ge=1)
    seed: int = Field(0, ge=0, lt=2**64, description="Seed for the uniform [0, 2pi) start")
    gradient_method: Literal["adjoint", "parameter_shift"] = Field("adjoint")


class VqeResult(BaseModel):
    """Outcome of one gradient-descent minimization."""

    final_energy: float
    final_params: List[float]
    iterations_used: int
    converged: bool
    energy_trace: List[float] = Field(default_factory=list)


class BoundInputs(BaseModel):
    """Inputs of the covering-number bounds."""

    d: int = Field(2, ge=2, description="Local qudit dimension")
    k: int = Field(2, ge=1, description="Maximum gate locality")
    n_gt: int = Field(..., ge=1, description="Number of trainable gates")
    eps: float = Field(0.01, gt=0, le=0.1, description="Covering radius")
    op_norm: float = Field(..., gt=0, description="Operator norm of the observable")


class CoveringBounds(BaseModel):
    """Natural-log lower/upper bounds of a covering number."""

    log_lower: float
    log_upper: float
    lower_bound_valid: bool = Field(True, description="N_gt meets the trainable-gate floor")


class ExpressiveRangeReport(BaseModel):
    """Acceptable depths of one template and the span of their bounds."""

    template_id: Optional[int] = None
    acceptable_depths: List[int]
    range_span: float = Field(..., ge=0)
    average_error: float
    accept_factor: float = 2.0

    @model_validator(mode="after")
    def _check_depths(self) -> "ExpressiveRangeReport":
        if not self.acceptable_depths:
            raise ValueError("acceptable_depths must be nonempty")
        if self.acceptable_depths != sorted(self.acceptable_depths):
            raise ValueError("acceptable_depths must be sorted")
        return self


class TrialResult(BaseModel):
    """One trial: a VQE run per bond length, reduced to the grid minimum."""

    template_id: int
    depth: int
    trial: int
    seed: int
    min_energy: float
    argmin_bond: float
    bond_energies: Dict[float, float] = Field(default_factory=dict)
    converged: bool = True


class DepthSweepRecord(BaseModel):
    """Error statistics of one (template, depth) cell."""

    template_id: int
    depth: int
    n_gt: int
    mean_error: float
    error_std: float = Field(..., ge=0)
    mean_bond_length: float
    trials: List[TrialResult] = Field(default_factory=list)

    @property
    def lower_error_bar(self) -> float:
        """Lower bar clamped so that it never extends below zero."""
        return self.error_std if self.mean_error - self.error_std >= 0 else max(self.mean_error, 0.0)


class SweepConfig(BaseModel):
    """Full description of a depth sweep."""

    templates: List[int] = Field(default_factory=lambda: [1, 2, 3, 4])
    depth_start: int = Field(1, ge=1)
    depth_stop: int = Field(15, ge=1)
    depth_caps: Dict[int, int] = Field(default_factory=lambda: {1: 10})
    trials: int = Field(10, ge=1)
    bond_grid: List[float] = Field(default_factory=lambda: [round(0.3 + 0.2 * i, 10) for i in range(10)])
    optimizer: OptimizerConfig = Field(default_factory=OptimizerConfig)
    master_seed: int = Field(0, ge=0)
    hamiltonian_file: str = "data/h2_sto3g_parity.txt"
    output_dir: str = "results"
    workers: int = Field(1, ge=1)
    overwrite: bool = False
    accept_factor: float = Field(2.0, ge=1.0)
    d: int = Field(2, ge=2)
    k: int = Field(2, ge=1)
    eps: float = Field(0.01, gt=0, le=0.1)
    reference_bond: Optional[float] = Field(0.8, description="Bond whose operator norm feeds the bounds")

    @model_validator(mode="after")
    def _check_sweep(self) -> "SweepConfig":
        if self.depth_stop < self.depth_start:
            raise ValueError(f"Empty depth range {self.depth_start}..{self.depth_stop}")
        if not self.templates:
            raise ValueError("At least one template is required")
        if not self.bond_grid:
            raise ValueError("Bond grid must be nonempty")
        return self

    def depths_for(self, template_id: int) -> List[int]:
        cap = self.depth_caps.get(template_id, self.depth_stop)
        return [d for d in range(self.depth_start, self.depth_stop + 1) if d <= cap]


class RunMetadata(BaseModel):
    """Contents of meta.json."""

    version: str
    generated_at: str
    config: SweepConfig
    seeds: Dict[str, List[int]] = Field(default_factory=dict, description="'template:depth' to per-trial seeds")
    reference_energy: float
    reference_energy_bond: float
    operator_norm: float
    operator_norm_without_identity: Optional[float] = None
    operator_norm_bond: float
    span_error_correlation: Optional[float] = None
    hamiltonian_source: str = ""


class Config(BaseModel):
    """Application configuration."""

    debug: bool = Field(False, description="Enable DEBUG logging")
    hamiltonian_file: str = Field("data/h2_sto3g_parity.txt", description="Pauli-sum coefficient file")
    output_dir: str = Field("results", description="Directory for sweep outputs")

    class OptimizerSettings(BaseModel):
        learning_rate: float = Field(0.4, gt=0)
        tolerance: float = Field(1e-6, gt=0)
        max_iterations: int = Field(5000, ge=1)
        gradient_method: Literal["adjoint", "parameter_shift"] = "adjoint"

    optimizer: OptimizerSettings = Field(default_factory=OptimizerSettings)

    class SweepSettings(BaseModel):
        templates: List[int] = Field(default_factory=lambda: [1, 2, 3, 4])
        depth_start: int = Field(1, ge=1)
        depth_stop: int = Field(15, ge=1)
        depth_caps: Dict[int, int] = Field(default_factory=lambda: {1: 10})
        trials: int = Field(10, ge=1)
        bond_start: float = Field(0.3, gt=0)
        bond_stop: float = Field(2.1, gt=0)
        bond_step: float = Field(0.2, gt=0)
        master_seed: int = Field(2024, ge=0)
        workers: int = Field(1, ge=1)
        overwrite: bool = False

    sweep: SweepSettings = Field(default_factory=SweepSettings)

    class BoundsSettings(BaseModel):
        d: int = Field(2, ge=2)
        k: int = Field(2, ge=1)
        eps: float = Field(0.01, gt=0, le=0.1)
        reference_bond: Optional[float] = 0.8
        accept_factor: float = Field(2.0, ge=1.0)

    bounds: BoundsSettings = Field(default_factory=BoundsSettings)

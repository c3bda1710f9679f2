"""
Regenerate the H2 / STO-3G qubit Hamiltonians (parity mapping, 4 qubits) with pyscf and qiskit_nature.

Dev-only: needs the ``oracle`` extra (``uv pip install -e '.[oracle]'``). The lab
itself only reads the committed coefficient file.

Usage:
    python -m scripts.generate_h2_hamiltonians --out data/h2_sto3g_parity.txt
    python -m scripts.generate_h2_hamiltonians --compare data/h2_sto3g_parity.txt
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Dict, Sequence

from src.hamiltonian import load_hamiltonians, write_hamiltonians
from src.models import MolecularHamiltonianSet, PauliSum
from src.range_utils import RangeParser

logger = logging.getLogger(__name__)

NUM_QUBITS = 4
COEFFICIENT_CUTOFF = 1e-10
DEFAULT_GRID = "0.3..2.1:0.2"
REFERENCE_BOND = 0.8


def qubit_hamiltonian(bond_angstrom: float) -> PauliSum:
    """Parity-mapped H2 Hamiltonian at one bond length, nuclear repulsion folded into the identity."""
    from qiskit_nature.second_q.drivers import PySCFDriver
    from qiskit_nature.second_q.mappers import ParityMapper

    driver = PySCFDriver(atom=f"H 0 0 0; H 0 0 {bond_angstrom}", basis="sto3g", charge=0, spin=0)
    problem = driver.run()

    # No num_particles: keeps all four qubits (no two-qubit reduction)
    mapper = ParityMapper()
    operator = mapper.map(problem.hamiltonian.second_q_op())

    pairs = [("I" * NUM_QUBITS, float(problem.nuclear_repulsion_energy))]
    for label, coefficient in operator.to_list():
        if abs(coefficient.imag) > 1e-12:
            raise ValueError(f"Non-real coefficient {coefficient} for {label}")
        pairs.append((label, float(coefficient.real)))
    merged = PauliSum.from_pairs(pairs, num_qubits=NUM_QUBITS)
    kept = [(t.string, t.coefficient) for t in merged.terms if abs(t.coefficient) > COEFFICIENT_CUTOFF]
    return PauliSum.from_pairs(kept, num_qubits=NUM_QUBITS)


def generate_h2_set(bonds: Sequence[float]) -> MolecularHamiltonianSet:
    hamiltonians: Dict[float, PauliSum] = {}
    for bond in sorted(set(float(b) for b in bonds)):
        hamiltonians[bond] = qubit_hamiltonian(bond)
        logger.info(f"bond {bond} A: {len(hamiltonians[bond].terms)} Pauli terms")
    return MolecularHamiltonianSet(
        molecule="H2",
        basis="sto3g",
        mapping="parity",
        num_qubits=NUM_QUBITS,
        includes_nuclear_repulsion=True,
        source="pyscf RHF STO-3G integrals, qiskit_nature ParityMapper without two-qubit reduction, nuclear repulsion in IIII",
        hamiltonians=hamiltonians,
    )


def max_deviation(generated: MolecularHamiltonianSet, committed: MolecularHamiltonianSet) -> float:
    """Largest coefficient difference over the bonds and Pauli words of both sets."""
    worst = 0.0
    for bond in generated.bond_lengths():
        key = committed.find_bond(bond)
        if key is None:
            raise ValueError(f"Committed file has no bond {bond}")
        ours, theirs = generated.hamiltonians[bond], committed.hamiltonians[key]
        words = {t.string for t in ours.terms} | {t.string for t in theirs.terms}
        for word in words:
            worst = max(worst, abs(ours.coefficient_of(word) - theirs.coefficient_of(word)))
    return worst


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description="Generate H2 STO-3G parity-mapped Hamiltonians with pyscf")
    parser.add_argument("--out", type=str, default=None, help="Write the coefficient file here")
    parser.add_argument("--compare", type=str, default=None, help="Report the largest deviation from this file")
    parser.add_argument("--bonds", type=RangeParser.parse_bond_grid, default=DEFAULT_GRID,
                        help="Bond grid in angstrom, e.g. 0.3..2.1:0.2 or 0.7,0.74")
    parser.add_argument("--no-reference-bond", action="store_true",
                        help=f"Do not add the {REFERENCE_BOND} A reference bond to the grid")
    args = parser.parse_args(argv)

    logging.basicConfig(level=logging.INFO, format='%(asctime)s - %(name)s - %(levelname)s - %(message)s')
    if args.out is None and args.compare is None:
        parser.error("pass --out, --compare or both")

    bonds = list(args.bonds) if args.no_reference_bond else list(args.bonds) + [REFERENCE_BOND]
    generated = generate_h2_set(bonds)
    if args.out:
        write_hamiltonians(generated, Path(args.out))
    if args.compare:
        deviation = max_deviation(generated, load_hamiltonians(args.compare))
        logger.info(f"Largest coefficient deviation from {args.compare}: {deviation:.3e}")
    return 0


if __name__ == "__main__":
    sys.exit(main())

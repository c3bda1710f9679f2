"""Pauli-sum Hamiltonians: file ingestion, dense materialization and spectra."""

import logging
import math
from pathlib import Path
from typing import Dict, List, Tuple, Union

import numpy as np

from .exceptions import DataValidationError, HamiltonianFormatError, NumericalError
from .models import MolecularHamiltonianSet, PAULI_ALPHABET, PauliSum

logger = logging.getLogger(__name__)

DENSE_QUBIT_CAP = 12
HERMITIAN_TOLERANCE = 1e-9
JACOBI_THRESHOLD = 1e-12
JACOBI_MAX_SWEEPS = 100

_PAULI_DENSE = {
    "I": np.eye(2, dtype=np.complex128),
    "X": np.array([[0, 1], [1, 0]], dtype=np.complex128),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    "Z": np.array([[1, 0], [0, -1]], dtype=np.complex128),
}

_HEADER_KEYS = ("molecule", "basis", "mapping", "qubits", "includes_nuclear_repulsion", "source")


def _parse_bool(value: str, line: int, field: str) -> bool:
    lowered = value.strip().lower()
    if lowered in ("true", "yes", "1"):
        return True
    if lowered in ("false", "no", "0"):
        return False
    raise HamiltonianFormatError(f"Expected a boolean, got {value!r}", line=line, field=field)


def _parse_header(text: str, line: int) -> Dict[str, str]:
    """Parse ``# key=value ...``; ``source`` swallows the rest of the line."""
    body = text.lstrip("#").strip()
    header: Dict[str, str] = {}
    while body:
        if body.startswith("source="):
            header["source"] = body[len("source="):].strip()
            break
        token, _, body = body.partition(" ")
        body = body.strip()
        if "=" not in token:
            raise HamiltonianFormatError(f"Malformed header token {token!r}", line=line, field="header")
        key, _, value = token.partition("=")
        header[key] = value
    for key in ("molecule", "qubits"):
        if key not in header:
            raise HamiltonianFormatError(f"Header is missing '{key}'", line=line, field=key)
    return header


def load_hamiltonians(path: Union[str, Path]) -> MolecularHamiltonianSet:
    """
    Load a Pauli-sum coefficient file.

    Format::

        # molecule=H2 basis=sto3g mapping=parity qubits=4 includes_nuclear_repulsion=true source=<text>
        bond 0.3
        IIII -0.1234
        ZIII 0.17

        bond 0.5
        ...

    Duplicate Pauli words inside one block are merged by summing.

    Raises:
        FileNotFoundError: If the file does not exist
        HamiltonianFormatError: On any parse or consistency failure
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Hamiltonian file not found: {path}")

    lines = path.read_text(encoding="utf-8").splitlines()
    if not lines or not lines[0].startswith("#"):
        raise HamiltonianFormatError("First line must be the '# molecule=...' header", line=1, field="header")
    header = _parse_header(lines[0], 1)

    try:
        num_qubits = int(header["qubits"])
    except ValueError:
        raise HamiltonianFormatError(f"Invalid qubit count {header['qubits']!r}", line=1, field="qubits")
    if num_qubits < 1:
        raise HamiltonianFormatError(f"Qubit count must be positive, got {num_qubits}", line=1, field="qubits")
    includes_nuclear = _parse_bool(header.get("includes_nuclear_repulsion", "true"), 1, "includes_nuclear_repulsion")

    blocks: Dict[float, List[Tuple[str, float]]] = {}
    current_bond = None
    for number, raw in enumerate(lines[1:], start=2):
        text = raw.strip()
        if not text or text.startswith("#"):
            continue
        fields = text.split()
        if fields[0] == "bond":
            if len(fields) != 2:
                raise HamiltonianFormatError("Expected 'bond <length>'", line=number, field="bond")
            try:
                bond = float(fields[1])
            except ValueError:
                raise HamiltonianFormatError(f"Invalid bond length {fields[1]!r}", line=number, field="bond")
            if not (math.isfinite(bond) and bond > 0):
                raise HamiltonianFormatError(f"Bond length must be positive, got {bond}", line=number, field="bond")
            if bond in blocks:
                raise HamiltonianFormatError(f"Duplicate bond length {bond}", line=number, field="bond")
            blocks[bond] = []
            current_bond = bond
            continue

        if current_bond is None:
            raise HamiltonianFormatError("Term appears before any 'bond' line", line=number, field="bond")
        if len(fields) != 2:
            raise HamiltonianFormatError("Expected '<pauli-word> <coefficient>'", line=number, field="term")
        word, coefficient_text = fields
        if len(word) != num_qubits:
            raise HamiltonianFormatError(
                f"Pauli word {word!r} has length {len(word)}, header says {num_qubits} qubits",
                line=number, field="pauli-word",
            )
        if set(word) - PAULI_ALPHABET:
            raise HamiltonianFormatError(f"Invalid Pauli word {word!r}", line=number, field="pauli-word")
        try:
            coefficient = float(coefficient_text)
        except ValueError:
            raise HamiltonianFormatError(f"Invalid coefficient {coefficient_text!r}", line=number, field="coefficient")
        if not math.isfinite(coefficient):
            raise HamiltonianFormatError(f"Coefficient must be finite, got {coefficient_text}", line=number, field="coefficient")
        blocks[current_bond].append((word, coefficient))

    if not blocks:
        raise HamiltonianFormatError("File contains no 'bond' blocks", line=len(lines), field="bond")

    hamiltonians = {
        bond: PauliSum.from_pairs(pairs, num_qubits=num_qubits) for bond, pairs in blocks.items()
    }
    result = MolecularHamiltonianSet(
        molecule=header["molecule"],
        basis=header.get("basis", ""),
        mapping=header.get("mapping", ""),
        num_qubits=num_qubits,
        includes_nuclear_repulsion=includes_nuclear,
        source=header.get("source", ""),
        hamiltonians=hamiltonians,
    )
    logger.info(f"Loaded {len(result)} {result.molecule} Hamiltonians on {num_qubits} qubits from {path}")
    return result


def write_hamiltonians(hamiltonian_set: MolecularHamiltonianSet, path: Union[str, Path]) -> Path:
    """Serialize a set in the coefficient-file format (17 significant digits)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    header = (
        f"# molecule={hamiltonian_set.molecule} basis={hamiltonian_set.basis or 'unknown'} "
        f"mapping={hamiltonian_set.mapping or 'unknown'} qubits={hamiltonian_set.num_qubits} "
        f"includes_nuclear_repulsion={'true' if hamiltonian_set.includes_nuclear_repulsion else 'false'} "
        f"source={hamiltonian_set.source}"
    )
    out = [header.rstrip()]
    for bond in hamiltonian_set.bond_lengths():
        out.append("")
        out.append(f"bond {bond!r}")
        for term in hamiltonian_set.hamiltonians[bond].terms:
            out.append(f"{term.string} {term.coefficient:.17g}")
    path.write_text("\n".join(out) + "\n", encoding="utf-8")
    logger.info(f"Wrote {len(hamiltonian_set)} Hamiltonians to {path}")
    return path


def pauli_matrix(word: str) -> np.ndarray:
    """Dense matrix of a Pauli word; the leftmost letter is the most significant qubit."""
    matrix = np.ones((1, 1), dtype=np.complex128)
    for letter in word:
        matrix = np.kron(matrix, _PAULI_DENSE[letter])
    return matrix


def to_dense(h: PauliSum) -> np.ndarray:
    """Materialize sum_i c_i P_i as a 2^N x 2^N complex matrix."""
    if h.num_qubits > DENSE_QUBIT_CAP:
        raise DataValidationError(f"Dense materialization is capped at {DENSE_QUBIT_CAP} qubits, got {h.num_qubits}")
    dim = 2 ** h.num_qubits
    matrix = np.zeros((dim, dim), dtype=np.complex128)
    for term in h.terms:
        matrix += term.coefficient * pauli_matrix(term.string)
    return matrix


def identity_coefficient(h: PauliSum) -> float:
    return h.coefficient_of("I" * h.num_qubits)


def without_identity(h: PauliSum) -> PauliSum:
    """Copy of ``h`` with the constant term dropped."""
    identity = "I" * h.num_qubits
    return PauliSum(num_qubits=h.num_qubits, terms=tuple(t for t in h.terms if t.string != identity))


def eigen_spectrum(
    matrix: np.ndarray,
    threshold: float = JACOBI_THRESHOLD,
    max_sweeps: int = JACOBI_MAX_SWEEPS,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Eigen-decomposition of a Hermitian matrix by cyclic complex Jacobi rotations.

    Each rotation first removes the phase of a[p, q] with a diagonal unitary and
    then zeroes it with a real plane rotation.

    Args:
        matrix: Square Hermitian matrix
        threshold: Stop once the off-diagonal Frobenius norm is below threshold * max(1, ||A||_F)
        max_sweeps: Sweep cap

    Returns:
        (eigenvalues ascending, eigenvectors as columns)

    Raises:
        NumericalError: If the input is not Hermitian or the sweeps do not converge
    """
    a = np.array(matrix, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NumericalError(f"Expected a square matrix, got shape {a.shape}")
    residue = float(np.max(np.abs(a - a.conj().T))) if a.size else 0.0
    if residue > HERMITIAN_TOLERANCE:
        raise NumericalError(f"Matrix is not Hermitian (max |A - A^H| = {residue:.3e})")
    a = 0.5 * (a + a.conj().T)
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    scale = max(1.0, float(np.linalg.norm(a)))

    converged = n <= 1
    for sweep in range(max_sweeps + 1):
        off = float(np.linalg.norm(a - np.diag(np.diag(a))))
        if off <= threshold * scale:
            converged = True
            logger.debug(f"Jacobi converged after {sweep} sweep(s), off-diagonal norm {off:.3e}")
            break
        if sweep == max_sweeps:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                r = abs(apq)
                if r < 1e-300:
                    continue
                phase = apq / r
                app = a[p, p].real
                aqq = a[q, q].real
                theta = (aqq - app) / (2.0 * r)
                t = (1.0 if theta >= 0 else -1.0) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                back = phase.conjugate()

                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = c * col_p - s * back * col_q
                a[:, q] = s * col_p + c * back * col_q
                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = c * row_p - s * phase * row_q
                a[q, :] = s * row_p + c * phase * row_q
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real

                vec_p = v[:, p].copy()
                vec_q = v[:, q].copy()
                v[:, p] = c * vec_p - s * back * vec_q
                v[:, q] = s * vec_p + c * back * vec_q

    if not converged:
        raise NumericalError(f"Jacobi eigensolver did not converge within {max_sweeps} sweeps")

    eigenvalues = np.real(np.diag(a)).copy()
    order = np.argsort(eigenvalues, kind="stable")
    return eigenvalues[order], v[:, order]


def ground_energy_exact(h: PauliSum) -> float:
    """Minimum eigenvalue of the dense Hamiltonian (Hartree)."""
    eigenvalues, _ = eigen_spectrum(to_dense(h))
    return float(eigenvalues[0])


def operator_norm(h: PauliSum) -> float:
    """||A|| = sqrt(mu_1(A A^H)) with A the dense Hamiltonian."""
    a = to_dense(h)
    mu, _ = eigen_spectrum(a @ a.conj().T)
    return math.sqrt(max(float(mu[-1]), 0.0))


def spectral_radius(h: PauliSum) -> float:
    """max |lambda| of the dense Hamiltonian; equals operator_norm for Hermitian input."""
    eigenvalues, _ = eigen_spectrum(to_dense(h))
    return float(np.max(np.abs(eigenvalues)))

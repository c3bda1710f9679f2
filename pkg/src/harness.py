"""
Experiment orchestration: bond scans, depth sweeps and multi-trial averaging.
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .ansatz import build_circuit, count_trainable
from .exceptions import DataValidationError
from .expressibility import best_expressive_range, covering_log_bounds
from .hamiltonian import ground_energy_exact, load_hamiltonians, operator_norm
from .models import (
    BoundInputs,
    CoveringBounds,
    DepthSweepRecord,
    ExpressiveRangeReport,
    MolecularHamiltonianSet,
    OptimizerConfig,
    PauliSum,
    SweepConfig,
    TrialResult,
)
from .vqe import minimize

logger = logging.getLogger(__name__)

NEGATIVE_ERROR_SLACK = 1e-9


def derive_trial_seed(master_seed: int, template_id: int, depth: int, trial: int) -> int:
    """64-bit seed that depends only on (master, template, depth, trial)."""
    sequence = np.random.SeedSequence([master_seed, template_id, depth, trial])
    return int(sequence.generate_state(1, dtype=np.uint64)[0])


def _bond_seed(trial_seed: int, bond_index: int) -> int:
    sequence = np.random.SeedSequence([trial_seed, bond_index])
    return int(sequence.generate_state(1, dtype=np.uint64)[0])


def resolve_bond_grid(h_set: MolecularHamiltonianSet, bond_grid: Sequence[float]) -> Dict[float, PauliSum]:
    """
    Map every grid entry to its Hamiltonian.

    Raises:
        DataValidationError: If a grid entry has no Hamiltonian in the set
    """
    if not bond_grid:
        raise DataValidationError("Bond grid must be nonempty")
    resolved: Dict[float, PauliSum] = {}
    missing = []
    for bond in bond_grid:
        key = h_set.find_bond(bond)
        if key is None:
            missing.append(bond)
        else:
            resolved[bond] = h_set.hamiltonians[key]
    if missing:
        raise DataValidationError(
            f"No Hamiltonian for bond length(s) {missing}; file has {h_set.bond_lengths()}"
        )
    return resolved


def run_single_trial(
    template_id: int,
    depth: int,
    bond_grid: Sequence[float],
    h_set: MolecularHamiltonianSet,
    opt_config: OptimizerConfig,
    trial_seed: int,
    trial: int = 0,
) -> TrialResult:
    """
    Run one VQE minimization per bond length and keep the lowest energy.

    Ties go to the smaller bond length.

    Raises:
        DataValidationError: If a grid entry is missing from ``h_set``
    """
    hamiltonians = resolve_bond_grid(h_set, bond_grid)
    circuit = build_circuit(template_id, depth)

    energies: Dict[float, float] = {}
    all_converged = True
    for index, bond in enumerate(bond_grid):
        config = opt_config.model_copy(update={"seed": _bond_seed(trial_seed, index)})
        result = minimize(circuit, hamiltonians[bond], config)
        energies[bond] = result.final_energy
        all_converged = all_converged and result.converged

    best_bond = None
    best_energy = None
    for bond in sorted(energies):
        if best_energy is None or energies[bond] < best_energy:
            best_bond, best_energy = bond, energies[bond]

    logger.debug(
        f"template {template_id} depth {depth} trial {trial}: "
        f"E_min = {best_energy:.10f} at {best_bond} A"
    )
    return TrialResult(
        template_id=template_id,
        depth=depth,
        trial=trial,
        seed=trial_seed,
        min_energy=best_energy,
        argmin_bond=best_bond,
        bond_energies=energies,
        converged=all_converged,
    )


def reference_energy(h_set: MolecularHamiltonianSet, bond_grid: Sequence[float]) -> Tuple[float, float]:
    """Exact minimum over the grid: (energy, bond), ties toward the smaller bond."""
    hamiltonians = resolve_bond_grid(h_set, bond_grid)
    best_bond = None
    best_energy = None
    for bond in sorted(hamiltonians):
        energy = ground_energy_exact(hamiltonians[bond])
        if best_energy is None or energy < best_energy:
            best_bond, best_energy = bond, energy
    return best_energy, best_bond


def select_reference_bond(
    h_set: MolecularHamiltonianSet,
    bond_grid: Sequence[float],
    preferred: Optional[float] = None,
) -> float:
    """
    Bond whose Hamiltonian norm feeds the covering bounds.

    The preferred bond is used when the file has it; otherwise the grid bond
    with the lowest exact ground energy.
    """
    if preferred is not None:
        key = h_set.find_bond(preferred)
        if key is not None:
            return key
    _, bond = reference_energy(h_set, bond_grid)
    if preferred is not None:
        logger.info(f"Bond {preferred} A not in the Hamiltonian file; using equilibrium grid bond {bond} A instead")
    return bond


def _run_task(task: Tuple[int, int, int, int, Sequence[float], MolecularHamiltonianSet, OptimizerConfig]) -> TrialResult:
    template_id, depth, trial, seed, bond_grid, h_set, opt_config = task
    return run_single_trial(template_id, depth, bond_grid, h_set, opt_config, seed, trial=trial)


def _summarize(template_id: int, depth: int, trials: List[TrialResult], reference: float) -> DepthSweepRecord:
    errors = np.array([t.min_energy - reference for t in trials], dtype=np.float64)
    bonds = np.array([t.argmin_bond for t in trials], dtype=np.float64)
    std = float(np.std(errors, ddof=1)) if len(errors) > 1 else 0.0
    record = DepthSweepRecord(
        template_id=template_id,
        depth=depth,
        n_gt=count_trainable(template_id, depth),
        mean_error=float(np.mean(errors)),
        error_std=std,
        mean_bond_length=float(np.mean(bonds)),
        trials=trials,
    )
    if errors.min() < -NEGATIVE_ERROR_SLACK:
        logger.warning(
            f"template {template_id} depth {depth}: trial energy {errors.min():.3e} Ha below the exact minimum"
        )
    return record


def run_depth_sweep(config: SweepConfig, h_set: Optional[MolecularHamiltonianSet] = None) -> List[DepthSweepRecord]:
    """
    One DepthSweepRecord per (template, depth), sorted by template then depth.

    Errors are measured against the exact minimum over the bond grid, which is
    computed once. ``workers > 1`` fans the trials out over processes.
    """
    if h_set is None:
        h_set = load_hamiltonians(config.hamiltonian_file)
    resolve_bond_grid(h_set, config.bond_grid)
    reference, reference_bond = reference_energy(h_set, config.bond_grid)

    logger.info("=" * 80)
    logger.info(
        f"Depth sweep: templates {config.templates}, depths {config.depth_start}..{config.depth_stop}, "
        f"{config.trials} trial(s), {len(config.bond_grid)} bond(s), {config.workers} worker(s)"
    )
    logger.info(f"Exact grid minimum: {reference:.10f} Ha at {reference_bond} A")
    logger.info("=" * 80)

    tasks = []
    for template_id in sorted(config.templates):
        for depth in config.depths_for(template_id):
            for trial in range(config.trials):
                seed = derive_trial_seed(config.master_seed, template_id, depth, trial)
                tasks.append((template_id, depth, trial, seed, list(config.bond_grid), h_set, config.optimizer))

    if config.workers > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as executor:
            results = list(executor.map(_run_task, tasks))
    else:
        results = [_run_task(task) for task in tasks]

    grouped: Dict[Tuple[int, int], List[TrialResult]] = {}
    for result in results:
        grouped.setdefault((result.template_id, result.depth), []).append(result)

    records = []
    for (template_id, depth) in sorted(grouped):
        trials = sorted(grouped[(template_id, depth)], key=lambda t: t.trial)
        record = _summarize(template_id, depth, trials, reference)
        logger.info(
            f"template {template_id} depth {depth:2d} (N_gt={record.n_gt}): "
            f"error {record.mean_error:.6e} +/- {record.error_std:.2e} Ha, mean bond {record.mean_bond_length:.3f} A"
        )
        records.append(record)

    logger.info("=" * 80)
    logger.info(f"Depth sweep finished: {len(records)} record(s)")
    logger.info("=" * 80)
    return records


def compute_bounds(
    records: Sequence[DepthSweepRecord], op_norm: float, d: int = 2, k: int = 2, eps: float = 0.01
) -> List[CoveringBounds]:
    """Covering bounds aligned with ``records``."""
    return [
        covering_log_bounds(BoundInputs(d=d, k=k, n_gt=record.n_gt, eps=eps, op_norm=op_norm))
        for record in records
    ]


def expressive_ranges(
    records: Sequence[DepthSweepRecord], bounds: Sequence[CoveringBounds], accept_factor: float = 2.0
) -> List[ExpressiveRangeReport]:
    """One ExpressiveRangeReport per template present in ``records``."""
    by_template: Dict[int, Tuple[List[DepthSweepRecord], List[CoveringBounds]]] = {}
    for record, bound in zip(records, bounds):
        group = by_template.setdefault(record.template_id, ([], []))
        group[0].append(record)
        group[1].append(bound)
    return [
        best_expressive_range(group[0], group[1], accept_factor)
        for _, group in sorted(by_template.items())
    ]


def reference_operator_norm(h_set: MolecularHamiltonianSet, bond: float) -> float:
    key = h_set.find_bond(bond)
    if key is None:
        raise DataValidationError(f"No Hamiltonian for bond length {bond}")
    return operator_norm(h_set.hamiltonians[key])

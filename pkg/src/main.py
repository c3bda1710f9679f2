"""
Main application entry point: VQE runs, depth sweeps, bounds and circuit dumps.
"""

import argparse
import logging
import sys
from datetime import datetime, timezone
from pathlib import Path
from typing import Dict, List, Optional, Sequence

from pydantic import ValidationError

from . import __version__
from .ansatz import build_circuit, count_trainable, dump_circuit, template_description
from .config import ConfigManager
from .exceptions import DataValidationError, HamiltonianFormatError, NumericalError
from .expressibility import (
    average_expressibility,
    bound_table,
    covering_log_bounds,
    min_trainable_gates,
    span_error_rank_correlation,
)
from .hamiltonian import ground_energy_exact, load_hamiltonians, operator_norm, without_identity
from .harness import (
    compute_bounds,
    expressive_ranges,
    reference_energy,
    reference_operator_norm,
    run_depth_sweep,
    select_reference_bond,
)
from .models import BoundInputs, OptimizerConfig, RunMetadata, SweepConfig
from .range_utils import IntRange, RangeParser, make_bond_grid, parse_depth_caps
from .report import export_results, write_bound_table
from .vqe import minimize

LOG_FILE = "vqe_lab.log"

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NUMERICAL = 3

logger = logging.getLogger(__name__)


def setup_logging(verbose: bool = False) -> None:
    """Configure root logging once for the CLI."""
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.INFO,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=[
            logging.FileHandler(LOG_FILE),
            logging.StreamHandler(sys.stdout)
        ],
        force=True,
    )


class LabArgumentParser(argparse.ArgumentParser):
    """ArgumentParser whose usage errors exit with status 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


class VqeLab:
    """Command handlers sharing one loaded configuration."""

    def __init__(self, config_path: str = "config.yaml", env_path: str = ".env"):
        logger.info("Initializing VQE lab...")
        self.config_manager = ConfigManager(config_path, env_path)
        self.config = self.config_manager.get_config()

    def _hamiltonian_path(self, override: Optional[str]) -> str:
        return override or self.config.hamiltonian_file

    def _default_grid(self) -> List[float]:
        sweep = self.config.sweep
        return make_bond_grid(sweep.bond_start, sweep.bond_stop, sweep.bond_step)

    def run_vqe(
        self,
        template_id: int,
        depth: int,
        bond: float,
        ham: Optional[str] = None,
        seed: int = 0,
        overrides: Optional[Dict] = None,
    ) -> int:
        """Single VQE run at one bond length; prints energy and parameters."""
        h_set = load_hamiltonians(self._hamiltonian_path(ham))
        key = h_set.find_bond(bond)
        if key is None:
            raise DataValidationError(f"No Hamiltonian for bond length {bond}; file has {h_set.bond_lengths()}")

        opt = self.config_manager.get_optimizer_config(seed)
        updates = {k: v for k, v in (overrides or {}).items() if v is not None}
        if updates:
            opt = OptimizerConfig(**{**opt.model_dump(), **updates})

        circuit = build_circuit(template_id, depth)
        logger.info(
            f"VQE: template {template_id}, depth {depth}, N_gt={circuit.num_params}, bond {key} A, seed {seed}"
        )
        result = minimize(circuit, h_set.hamiltonians[key], opt)

        print(f"energy: {result.final_energy!r}")
        print(f"iterations: {result.iterations_used}")
        print(f"converged: {str(result.converged).lower()}")
        print("parameters: " + " ".join(repr(p) for p in result.final_params))
        return EXIT_OK

    def run_sweep(self, sweep_config: SweepConfig) -> int:
        """Full protocol: depth sweep, bounds, expressive ranges and export."""
        out_dir = Path(sweep_config.output_dir)
        if out_dir.exists() and any(out_dir.iterdir()) and not sweep_config.overwrite:
            raise FileExistsError(f"Output directory {out_dir} is not empty; pass --overwrite to replace it")

        is_valid, warning = RangeParser.validate_depth_range(IntRange(sweep_config.depth_start, sweep_config.depth_stop))
        if not is_valid:
            raise DataValidationError(warning)
        for template_id in sweep_config.templates:
            if not sweep_config.depths_for(template_id):
                raise DataValidationError(f"Depth caps leave no depths for template {template_id}")

        h_set = load_hamiltonians(sweep_config.hamiltonian_file)
        records = run_depth_sweep(sweep_config, h_set)

        ref_energy, ref_energy_bond = reference_energy(h_set, sweep_config.bond_grid)
        norm_bond = select_reference_bond(h_set, sweep_config.bond_grid, sweep_config.reference_bond)
        op_norm = reference_operator_norm(h_set, norm_bond)
        op_norm_bare = operator_norm(without_identity(h_set.hamiltonians[norm_bond]))
        logger.info(f"Operator norm at {norm_bond} A: {op_norm:.8f} (without identity: {op_norm_bare:.8f})")

        bounds = compute_bounds(records, op_norm, sweep_config.d, sweep_config.k, sweep_config.eps)
        reports = expressive_ranges(records, bounds, sweep_config.accept_factor)

        seeds = {
            f"{record.template_id}:{record.depth}": [t.seed for t in record.trials]
            for record in records
        }
        metadata = RunMetadata(
            version=__version__,
            generated_at=datetime.now(timezone.utc).isoformat(),
            config=sweep_config,
            seeds=seeds,
            reference_energy=ref_energy,
            reference_energy_bond=ref_energy_bond,
            operator_norm=op_norm,
            operator_norm_without_identity=op_norm_bare,
            operator_norm_bond=norm_bond,
            span_error_correlation=span_error_rank_correlation(reports),
            hamiltonian_source=h_set.source,
        )
        export_results(records, bounds, reports, out_dir, metadata, overwrite=sweep_config.overwrite)

        for report in reports:
            logger.info(
                f"template {report.template_id}: acceptable depths {report.acceptable_depths}, "
                f"span {report.range_span:.4f}, average error {report.average_error:.6e} Ha"
            )
        return EXIT_OK

    def run_bounds(
        self,
        n_gt: Optional[int] = None,
        template_id: Optional[int] = None,
        depths: Optional[Sequence[int]] = None,
        d: Optional[int] = None,
        k: Optional[int] = None,
        eps: Optional[float] = None,
        op_norm: Optional[float] = None,
        ham: Optional[str] = None,
        out: Optional[str] = None,
    ) -> int:
        """Print covering bounds and the trainable-gate floor."""
        settings = self.config.bounds
        d = d if d is not None else settings.d
        k = k if k is not None else settings.k
        eps = eps if eps is not None else settings.eps

        if op_norm is None:
            h_set = load_hamiltonians(self._hamiltonian_path(ham))
            grid = [b for b in self._default_grid() if h_set.find_bond(b) is not None] or h_set.bond_lengths()
            bond = select_reference_bond(h_set, grid, settings.reference_bond)
            op_norm = reference_operator_norm(h_set, bond)
            logger.info(f"Using operator norm {op_norm:.8f} of the Hamiltonian at {bond} A")

        floor = min_trainable_gates(op_norm)
        print(f"operator norm: {op_norm!r}")
        print(f"trainable-gate floor: {floor}")

        if n_gt is not None:
            bounds = covering_log_bounds(BoundInputs(d=d, k=k, n_gt=n_gt, eps=eps, op_norm=op_norm))
            print(f"n_gt: {n_gt}")
            print(f"log_lower: {bounds.log_lower!r}")
            print(f"log_upper: {bounds.log_upper!r}")
            print(f"avg_expressibility: {average_expressibility(bounds)!r}")
            print(f"lower_bound_valid: {str(bounds.lower_bound_valid).lower()}")

        if template_id is not None:
            rows = bound_table(template_id, depths or [1], op_norm, d, k, eps)
            print("template,depth,n_gt,log_lower,log_upper,avg_expressibility")
            for row in rows:
                print(
                    f"{row['template']},{row['depth']},{row['n_gt']},"
                    f"{row['log_lower']!r},{row['log_upper']!r},{row['avg_expressibility']!r}"
                )
            if out:
                write_bound_table(rows, Path(out) / "bounds.csv")
        return EXIT_OK

    def run_exact(self, ham: Optional[str] = None) -> int:
        """Per-bond exact ground energies and operator norms."""
        h_set = load_hamiltonians(self._hamiltonian_path(ham))
        print("bond,ground_energy,operator_norm,operator_norm_without_identity")
        for bond in h_set.bond_lengths():
            h = h_set.hamiltonians[bond]
            print(
                f"{bond!r},{ground_energy_exact(h)!r},{operator_norm(h)!r},"
                f"{operator_norm(without_identity(h))!r}"
            )
        return EXIT_OK

    def run_dump_circuit(self, template_id: int, depth: int) -> int:
        """Textual gate listing of a template circuit."""
        circuit = build_circuit(template_id, depth)
        print(f"# template {template_id}: {template_description(template_id)}")
        print(
            f"# depth {depth}: N_gt={count_trainable(template_id, depth)} "
            f"N_g={circuit.num_gates} entangling={circuit.num_entangling}"
        )
        print(dump_circuit(circuit))
        return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = LabArgumentParser(prog="vqe-lab", description="VQE laboratory with covering-number bounds")
    parser.add_argument("--config", type=str, default="config.yaml", help="Path to config file")
    parser.add_argument("--env", type=str, default=".env", help="Path to .env file")
    parser.add_argument("--verbose", action="store_true", help="Enable DEBUG logging")
    subparsers = parser.add_subparsers(dest="command", required=True)

    vqe = subparsers.add_parser("vqe", help="Single VQE run")
    vqe.add_argument("--template", type=int, required=True, choices=[1, 2, 3, 4])
    vqe.add_argument("--depth", type=int, required=True)
    vqe.add_argument("--bond", type=float, required=True, help="Bond length in angstrom")
    vqe.add_argument("--ham", type=str, default=None, help="Hamiltonian coefficient file")
    vqe.add_argument("--seed", type=int, default=0)
    vqe.add_argument("--lr", type=float, default=None, help="Learning rate (default from config)")
    vqe.add_argument("--tol", type=float, default=None, help="Energy-change tolerance")
    vqe.add_argument("--max-iter", type=int, default=None, help="Iteration cap")
    vqe.add_argument("--gradient", choices=["adjoint", "parameter_shift"], default=None)

    sweep = subparsers.add_parser("sweep", help="Full depth-sweep protocol")
    sweep.add_argument("--templates", type=RangeParser.parse_int_list, default=None, help="e.g. 1,2,3,4")
    sweep.add_argument("--depths", type=RangeParser.parse_int_range, default=None, help="e.g. 1..15")
    sweep.add_argument("--depth-caps", type=parse_depth_caps, default=None, help="e.g. 1=10 or none")
    sweep.add_argument("--trials", type=int, default=None)
    sweep.add_argument("--bonds", type=RangeParser.parse_bond_grid, default=None, help="e.g. 0.3..2.1:0.2")
    sweep.add_argument("--ham", type=str, default=None)
    sweep.add_argument("--seed", type=int, default=None, help="Master seed")
    sweep.add_argument("--out", type=str, default=None, help="Output directory")
    sweep.add_argument("--accept-factor", type=float, default=None)
    sweep.add_argument("--workers", type=int, default=None)
    sweep.add_argument("--overwrite", action="store_true", default=None, help="Replace earlier results")

    bounds = subparsers.add_parser("bounds", help="Covering-number bounds")
    bounds.add_argument("--ngt", type=int, default=None, help="Number of trainable gates")
    bounds.add_argument("--template", type=int, default=None, choices=[1, 2, 3, 4])
    bounds.add_argument("--depths", type=RangeParser.parse_int_range, default=None)
    bounds.add_argument("--d", type=int, default=None)
    bounds.add_argument("--k", type=int, default=None)
    bounds.add_argument("--eps", type=float, default=None)
    bounds.add_argument("--opnorm", type=float, default=None, help="Observable norm (default: reference bond)")
    bounds.add_argument("--ham", type=str, default=None)
    bounds.add_argument("--out", type=str, default=None, help="Directory for bounds.csv")

    exact = subparsers.add_parser("exact", help="Exact ground energies and norms")
    exact.add_argument("--ham", type=str, default=None)

    dump = subparsers.add_parser("dump-circuit", help="Textual gate listing")
    dump.add_argument("--template", type=int, required=True, choices=[1, 2, 3, 4])
    dump.add_argument("--depth", type=int, required=True)

    return parser


def _dispatch(lab: VqeLab, args: argparse.Namespace) -> int:
    if args.command == "vqe":
        return lab.run_vqe(
            args.template, args.depth, args.bond, args.ham, args.seed,
            overrides={
                "learning_rate": args.lr,
                "tolerance": args.tol,
                "max_iterations": args.max_iter,
                "gradient_method": args.gradient,
            },
        )
    if args.command == "sweep":
        overrides = {
            "templates": args.templates,
            "depth_caps": args.depth_caps,
            "trials": args.trials,
            "bond_grid": args.bonds,
            "hamiltonian_file": args.ham,
            "master_seed": args.seed,
            "output_dir": args.out,
            "accept_factor": args.accept_factor,
            "workers": args.workers,
            "overwrite": args.overwrite,
        }
        if args.depths is not None:
            overrides["depth_start"] = args.depths.start
            overrides["depth_stop"] = args.depths.end
        return lab.run_sweep(lab.config_manager.get_sweep_config(**overrides))
    if args.command == "bounds":
        if args.ngt is None and args.template is None:
            raise DataValidationError("bounds needs --ngt or --template")
        depths = args.depths.values() if args.depths is not None else None
        return lab.run_bounds(
            n_gt=args.ngt, template_id=args.template, depths=depths,
            d=args.d, k=args.k, eps=args.eps, op_norm=args.opnorm, ham=args.ham, out=args.out,
        )
    if args.command == "exact":
        return lab.run_exact(args.ham)
    return lab.run_dump_circuit(args.template, args.depth)


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Main entry point."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE

    setup_logging(args.verbose)

    try:
        lab = VqeLab(args.config, args.env)
        if lab.config.debug:
            logging.getLogger().setLevel(logging.DEBUG)
        return _dispatch(lab, args)
    except KeyboardInterrupt:
        logger.info("Stopped by user")
        return EXIT_USAGE
    except NumericalError as e:
        logger.error(f"Numerical failure: {e}")
        return EXIT_NUMERICAL
    except (DataValidationError, HamiltonianFormatError, ValidationError) as e:
        logger.error(f"Invalid input: {e}")
        return EXIT_DATA
    except OSError as e:
        logger.error(f"File error: {e}")
        return EXIT_DATA
    except ValueError as e:
        logger.error(f"Invalid value: {e}")
        return EXIT_DATA
    except Exception as e:
        logger.error(f"Failed: {e}", exc_info=True)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

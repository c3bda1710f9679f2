"""Export of sweep results: sweep.csv, report.txt, meta.json and bounds.csv."""

import csv
import io
import logging
import os
import shutil
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Union

from .exceptions import DataValidationError
from .expressibility import (
    average_expressibility,
    min_trainable_gates,
    printed_constant_check,
    span_error_rank_correlation,
)
from .models import CoveringBounds, DepthSweepRecord, ExpressiveRangeReport, RunMetadata

logger = logging.getLogger(__name__)

SWEEP_COLUMNS = [
    "template", "depth", "n_gt", "mean_error", "error_std", "mean_bond",
    "log_lower", "log_upper", "avg_expressibility", "lower_bar", "upper_bar",
]
BOUND_COLUMNS = ["template", "depth", "n_gt", "log_lower", "log_upper", "avg_expressibility"]
ARTIFACTS = ("sweep.csv", "report.txt", "meta.json")


def _fmt(value) -> str:
    return repr(float(value)) if isinstance(value, float) else str(value)


def _csv_text(columns: List[str], rows: List[Dict]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_fmt(row[column]) for column in columns])
    return buffer.getvalue()


def _write_atomic(path: Path, text: str) -> None:
    tmp = path.with_name(f".{path.name}.tmp")
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, path)


def sweep_rows(records: Sequence[DepthSweepRecord], bounds: Sequence[CoveringBounds]) -> List[Dict]:
    rows = []
    for record, bound in zip(records, bounds):
        rows.append({
            "template": record.template_id,
            "depth": record.depth,
            "n_gt": record.n_gt,
            "mean_error": record.mean_error,
            "error_std": record.error_std,
            "mean_bond": record.mean_bond_length,
            "log_lower": bound.log_lower,
            "log_upper": bound.log_upper,
            "avg_expressibility": average_expressibility(bound),
            "lower_bar": record.lower_error_bar,
            "upper_bar": record.error_std,
        })
    return rows


def format_report(
    reports: Sequence[ExpressiveRangeReport],
    metadata: Optional[RunMetadata] = None,
) -> str:
    """Human-readable summary of the acceptable depth sets and their spans."""
    lines = [
        "=" * 80,
        "EXPRESSIVE RANGE REPORT",
        "=" * 80,
    ]
    if metadata is not None:
        config = metadata.config
        lines.extend([
            f"Hamiltonian source: {metadata.hamiltonian_source or config.hamiltonian_file}",
            f"Exact grid minimum: {metadata.reference_energy:.10f} Ha at {metadata.reference_energy_bond} A",
            f"Operator norm at {metadata.operator_norm_bond} A: {metadata.operator_norm:.8f}",
        ])
        if metadata.operator_norm_without_identity is not None:
            lines.append(f"Operator norm without identity term: {metadata.operator_norm_without_identity:.8f}")
        lines.append(f"Trainable-gate floor ceil(2/||O||): {min_trainable_gates(metadata.operator_norm)}")
        constants = printed_constant_check(metadata.operator_norm, config.eps)
        lines.extend([
            f"Bound constants (d={config.d}, k={config.k}, eps={config.eps}): "
            f"3||O||/(8 eps) = {constants['substituted_lower']:.6f}, 7||O||/eps = {constants['substituted_upper']:.6f}",
            f"Published constants: {constants['printed_lower']:.6f}, {constants['printed_upper']:.6f}",
        ])
        lines.append("-" * 80)

    lines.append(f"{'template':>8}  {'span':>16}  {'average error':>16}  acceptable depths")
    for report in reports:
        depths = ",".join(str(d) for d in report.acceptable_depths)
        template = "-" if report.template_id is None else str(report.template_id)
        lines.append(f"{template:>8}  {report.range_span:>16.6f}  {report.average_error:>16.8f}  {depths}")

    lines.append("-" * 80)
    rho = span_error_rank_correlation(reports)
    rho_text = "undefined" if rho is None else f"{rho:.6f}"
    lines.append(f"Spearman rho(span, average error): {rho_text}")
    if reports:
        lines.append(f"Acceptance factor: {reports[0].accept_factor}")
    lines.append("=" * 80)
    return "\n".join(lines) + "\n"


def _prepare_dir(out_dir: Path, overwrite: bool) -> None:
    if out_dir.exists() and any(out_dir.iterdir()):
        if not overwrite:
            raise FileExistsError(f"Output directory {out_dir} is not empty; pass --overwrite to replace it")
        for stale in sorted(out_dir.iterdir()):
            if stale.is_dir() and not stale.is_symlink():
                shutil.rmtree(stale)
            else:
                stale.unlink()
            logger.info(f"Removed stale {stale}")
    out_dir.mkdir(parents=True, exist_ok=True)


def export_results(
    records: Sequence[DepthSweepRecord],
    bounds: Sequence[CoveringBounds],
    reports: Sequence[ExpressiveRangeReport],
    out_dir: Union[str, Path],
    metadata: Optional[RunMetadata] = None,
    overwrite: bool = False,
) -> List[Path]:
    """
    Write sweep.csv, report.txt and meta.json into ``out_dir``.

    Args:
        records: Depth sweep records, one row each
        bounds: Covering bounds aligned with ``records``
        reports: Per-template expressive ranges
        out_dir: Target directory
        metadata: Run metadata echoed into meta.json and the report header
        overwrite: Replace earlier artifacts instead of refusing

    Returns:
        Paths of the written files

    Raises:
        DataValidationError: Empty records or mismatched bounds
        FileExistsError: Non-empty output directory without ``overwrite``
        OSError: Output path not writable
    """
    if not records:
        raise DataValidationError("export_results needs at least one record")
    if len(records) != len(bounds):
        raise DataValidationError(f"{len(records)} records but {len(bounds)} bounds")

    out_dir = Path(out_dir)
    # all artifacts are rendered before the directory is touched
    contents = {
        "sweep.csv": _csv_text(SWEEP_COLUMNS, sweep_rows(records, bounds)),
        "report.txt": format_report(reports, metadata),
        "meta.json": (metadata.model_dump_json(indent=2) + "\n") if metadata is not None else "{}\n",
    }
    _prepare_dir(out_dir, overwrite)

    written = []
    for name in ARTIFACTS:
        path = out_dir / name
        _write_atomic(path, contents[name])
        written.append(path)
        logger.info(f"Wrote {path}")
    return written


def write_bound_table(rows: Sequence[Dict], path: Union[str, Path]) -> Path:
    """Write ``bound_table`` rows as bounds.csv."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    _write_atomic(path, _csv_text(BOUND_COLUMNS, list(rows)))
    logger.info(f"Wrote {path}")
    return path

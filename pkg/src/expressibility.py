"""
Covering-number bounds of an ansatz hypothesis space and the statistics built on them.

For a circuit with N_gt trainable gates of locality k on qudits of dimension d,
observable norm ||O|| and radius 0 < eps <= 1/10 (natural logarithms):

    d^(2k) N_gt ln(3 N_gt ||O|| / (8 eps)) <= ln N(H, eps) <= d^(2k) N_gt ln(7 N_gt ||O|| / eps)

The lower bound holds when N_gt >= 2 / ||O||.
"""

import logging
import math
from typing import Dict, List, Optional, Sequence

from scipy.stats import spearmanr

from .ansatz import count_trainable
from .exceptions import DataValidationError
from .models import BoundInputs, CoveringBounds, DepthSweepRecord, ExpressiveRangeReport

logger = logging.getLogger(__name__)

LOWER_CONSTANT = 3.0 / 8.0
UPPER_CONSTANT = 7.0
UNITARY_LOWER_CONSTANT = 3.0 / 4.0

# Published reference values, echoed in the report next to the computed ones.
REFERENCE_OPERATOR_NORM = 1.16863955
PRINTED_LOWER_CONSTANT = 115.037956
PRINTED_UPPER_CONSTANT = 43.8239831

DEFAULT_ACCEPT_FACTOR = 2.0


def min_trainable_gates(op_norm: float) -> int:
    """Smallest integer N_gt with N_gt >= 2 / ||O||."""
    if not op_norm > 0:
        raise DataValidationError(f"Operator norm must be positive, got {op_norm}")
    return max(1, math.ceil(2.0 / op_norm))


def covering_log_bounds(inp: BoundInputs) -> CoveringBounds:
    """Natural-log lower and upper bounds of the hypothesis-space covering number."""
    exponent = inp.d ** (2 * inp.k) * inp.n_gt
    scale = inp.n_gt * inp.op_norm / inp.eps
    floor = min_trainable_gates(inp.op_norm)
    valid = inp.n_gt >= floor
    if not valid:
        logger.warning(f"N_gt={inp.n_gt} is below the trainable-gate floor {floor}; lower bound not guaranteed")
    return CoveringBounds(
        log_lower=float(exponent) * math.log(LOWER_CONSTANT * scale),
        log_upper=float(exponent) * math.log(UPPER_CONSTANT * scale),
        lower_bound_valid=valid,
    )


def unitary_group_log_bounds(d: int, k: int, eps: float) -> CoveringBounds:
    """Log bounds of the eps-covering number of U(d^k) under the operator norm."""
    if d < 2 or k < 1:
        raise DataValidationError(f"Need d >= 2 and k >= 1, got d={d}, k={k}")
    if not 0 < eps <= 0.1:
        raise DataValidationError(f"eps must lie in (0, 0.1], got {eps}")
    exponent = float(d ** (2 * k))
    return CoveringBounds(
        log_lower=exponent * math.log(UNITARY_LOWER_CONSTANT / eps),
        log_upper=exponent * math.log(UPPER_CONSTANT / eps),
    )


def hypothesis_cover_radius(n_gt: int, op_norm: float, eps: float) -> float:
    """Radius N_gt ||O|| eps at which the gate-wise net covers the conjugated observables."""
    return n_gt * op_norm * eps


def average_expressibility(bounds: CoveringBounds) -> float:
    """Midpoint of the two log bounds."""
    return 0.5 * (bounds.log_lower + bounds.log_upper)


def printed_constant_check(op_norm: float = REFERENCE_OPERATOR_NORM, eps: float = 0.01) -> Dict[str, float]:
    """Constants obtained by substituting ||O|| and eps next to the printed pair."""
    return {
        "substituted_lower": LOWER_CONSTANT * op_norm / eps,
        "substituted_upper": UPPER_CONSTANT * op_norm / eps,
        "printed_lower": PRINTED_LOWER_CONSTANT,
        "printed_upper": PRINTED_UPPER_CONSTANT,
    }


def bound_table(
    template_id: int,
    depths: Sequence[int],
    op_norm: float,
    d: int = 2,
    k: int = 2,
    eps: float = 0.01,
) -> List[Dict[str, float]]:
    """Rows ``template,depth,n_gt,log_lower,log_upper,avg_expressibility``."""
    rows = []
    for depth in depths:
        n_gt = count_trainable(template_id, depth)
        bounds = covering_log_bounds(BoundInputs(d=d, k=k, n_gt=n_gt, eps=eps, op_norm=op_norm))
        rows.append({
            "template": template_id,
            "depth": depth,
            "n_gt": n_gt,
            "log_lower": bounds.log_lower,
            "log_upper": bounds.log_upper,
            "avg_expressibility": average_expressibility(bounds),
        })
    return rows


def best_expressive_range(
    records: Sequence[DepthSweepRecord],
    bounds: Sequence[CoveringBounds],
    accept_factor: float = DEFAULT_ACCEPT_FACTOR,
) -> ExpressiveRangeReport:
    """
    Acceptable depths and the span of their bounds.

    A depth is acceptable when its mean error is at most ``accept_factor`` times
    the smallest mean error. The span runs from the lower bound of the leftmost
    acceptable depth to the upper bound of the rightmost one (log domain).

    Raises:
        DataValidationError: Empty input or mismatched lengths
    """
    if not records:
        raise DataValidationError("best_expressive_range needs at least one record")
    if len(records) != len(bounds):
        raise DataValidationError(f"{len(records)} records but {len(bounds)} bounds")

    pairs = sorted(zip(records, bounds), key=lambda item: item[0].depth)
    best = min(record.mean_error for record, _ in pairs)
    threshold = accept_factor * best
    # a non-positive minimum makes the multiplicative threshold degenerate
    if best <= 0:
        threshold = best + abs(best) * (accept_factor - 1.0)
    accepted = [(record, b) for record, b in pairs if record.mean_error <= threshold]

    leftmost = accepted[0][1]
    rightmost = accepted[-1][1]
    span = rightmost.log_upper - leftmost.log_lower
    average_error = sum(record.mean_error for record, _ in accepted) / len(accepted)
    template_ids = {record.template_id for record, _ in pairs}

    return ExpressiveRangeReport(
        template_id=template_ids.pop() if len(template_ids) == 1 else None,
        acceptable_depths=[record.depth for record, _ in accepted],
        range_span=span,
        average_error=average_error,
        accept_factor=accept_factor,
    )


def span_error_rank_correlation(reports: Sequence[ExpressiveRangeReport]) -> Optional[float]:
    """Spearman rho between range_span and average_error; None when undefined."""
    if len(reports) < 2:
        return None
    spans = [r.range_span for r in reports]
    errors = [r.average_error for r in reports]
    if len(set(spans)) < 2 or len(set(errors)) < 2:
        return None
    rho, _ = spearmanr(spans, errors)
    if rho is None or math.isnan(rho):
        return None
    return float(rho)

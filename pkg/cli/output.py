"""
Console formatting and CSV/JSON artifacts for the command-line surface
"""
import json
import logging
import os
import sys
from pathlib import Path
from typing import Iterable, List, Union

import pandas as pd

from errors import InputError
from models import CheckPayload, DistributionEntry, RunReport, SolvePayload, SweepRow, VerifyPayload

logger = logging.getLogger(__name__)

SWEEP_COLUMNS = ["prior", "v_s", "cav_unconstrained", "cav_constrained"]
FLOAT_FORMAT = "%.12g"

_GREEN = "\033[32m"
_RED = "\033[31m"
_RESET = "\033[0m"


def use_color() -> bool:
    return "NO_COLOR" not in os.environ and sys.stdout.isatty()


def verdict(ok: bool, yes: str = "PASS", no: str = "FAIL") -> str:
    text = yes if ok else no
    if not use_color():
        return text
    return f"{_GREEN if ok else _RED}{text}{_RESET}"


def format_distribution(entries: Iterable[DistributionEntry]) -> List[str]:
    return [f"  {entry.weight} at belief {entry.belief}" for entry in entries]


def render_solve(payload: SolvePayload) -> str:
    lines = [
        f"solver: {payload.solver}",
        f"prior: {payload.prior}",
        f"value: {payload.value}",
        "distribution:",
        *format_distribution(payload.distribution),
    ]
    if payload.used_no_information:
        lines.append("no information is optimal")
    if payload.feasible_set_cardinalities:
        sizes = ", ".join(str(c) for c in payload.feasible_set_cardinalities)
        lines.append(f"feasible set sizes |M_1| .. |M_{len(payload.feasible_set_cardinalities)}|: {sizes}")
    if payload.lattice is not None:
        info = payload.lattice
        lines.append(
            f"lattice: {info.element_count} elements, {info.order_edges} strict relations, "
            f"grid {info.grid_size} points, Q={info.denominator}, support size {info.support_size}"
        )
    if payload.naive_lower_bound is not None:
        lines.append(f"naive lower bound: {payload.naive_lower_bound}")
    if payload.unconstrained_bound is not None:
        lines.append(f"unconstrained concavification: {payload.unconstrained_bound}")
    lines.extend(f"warning: {w}" for w in payload.warnings)
    return "\n".join(lines)


def render_check(payload: CheckPayload) -> str:
    beliefs = ", ".join(payload.beliefs)
    if payload.query == "dist":
        lines = [
            f"distribution in M^eps of mediator {payload.mediator}: {verdict(payload.dominating, 'true', 'false')}",
            f"own expected utility: {payload.own_value}",
            f"best contraction value: {payload.best_contraction_value}",
        ]
        if not payload.dominating:
            lines.append("profitable garbling:")
            lines.extend(format_distribution(payload.garbling))
        return "\n".join(lines)
    lines = [f"{payload.query} {{{beliefs}}} against mediator {payload.mediator}: "
             f"{verdict(payload.dominating, 'true', 'false')}"]
    if payload.violation is not None:
        v = payload.violation
        weights = ", ".join(f"{w:.6g}" for w in v.weights)
        lines.append(
            f"violation: weights ({weights}) on ({', '.join(v.beliefs)}) give mean {v.mean}, "
            f"chord minus utility {v.gap:.6g}"
        )
    return "\n".join(lines)


def render_verify(payload: VerifyPayload) -> str:
    lines = []
    if payload.seed is not None:
        lines.append(f"random instance seed: {payload.seed}")
    lines.extend([
        f"lattice elements: {payload.element_count}",
        f"feasible-set value: {payload.chain_value}",
        f"poset game value: {payload.poset_value}",
        f"backward induction value: {payload.verifier_value}",
        verdict(payload.passed),
    ])
    return "\n".join(lines)


def render_rows(rows: List[SweepRow]) -> str:
    header = "  ".join(f"{c:>18}" for c in SWEEP_COLUMNS)
    body = [
        "  ".join(f"{v:>18.12g}" for v in (r.prior, r.v_s, r.cav_unconstrained, r.cav_constrained))
        for r in rows
    ]
    return "\n".join([header, *body])


def sweep_frame(rows: List[SweepRow]) -> pd.DataFrame:
    return pd.DataFrame([r.model_dump() for r in rows], columns=SWEEP_COLUMNS)


def write_sweep_csv(rows: List[SweepRow], path: Union[str, Path]) -> None:
    sweep_frame(rows).to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    logger.info(f"Wrote {len(rows)} sweep rows to {path}")


def read_sweep_csv(path: Union[str, Path]) -> pd.DataFrame:
    """Load a sweep CSV, failing early on missing columns, empty data or non-numeric cells"""
    path = Path(path)
    if not path.is_file():
        raise InputError(f"Sweep CSV not found: {path}", path=str(path))
    try:
        frame = pd.read_csv(path)
    except (pd.errors.EmptyDataError, pd.errors.ParserError) as e:
        raise InputError(f"Malformed sweep CSV {path}: {e}", path=str(path))
    if list(frame.columns) != SWEEP_COLUMNS:
        raise InputError(
            f"Sweep CSV {path} must have columns {','.join(SWEEP_COLUMNS)}",
            path=str(path), columns=list(frame.columns),
        )
    if frame.empty:
        raise InputError(f"Sweep CSV {path} has no rows", path=str(path))
    try:
        frame = frame.astype(float)
    except ValueError as e:
        raise InputError(f"Sweep CSV {path} has non-numeric cells: {e}", path=str(path))
    return frame


def report_json(report: RunReport) -> str:
    return json.dumps(report.model_dump(mode="json"), indent=2, sort_keys=True)


def write_report(report: RunReport, path: Union[str, Path]) -> None:
    Path(path).write_text(report_json(report) + "\n", encoding="utf-8")

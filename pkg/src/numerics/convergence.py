"""Refinement studies: norms per level and observed orders from successive ratios."""
import csv
import io
import math
from collections.abc import Callable
from dataclasses import dataclass

from rich.console import Console

console = Console(stderr=True)

CSV_COLUMNS = ("level", "h", "max_norm", "l2_norm", "observed_order")


@dataclass(frozen=True)
class ConvergenceRow:
    level: int
    h: float
    max_norm: float
    l2_norm: float
    observed_order: float | None = None
    monotone: bool = True


def observed_order(e_prev: float, e: float, h_prev: float, h: float) -> float | None:
    """log(e_prev / e) / log(h_prev / h); None when either norm is zero."""
    if e_prev <= 0 or e <= 0 or h_prev == h:
        return None
    return math.log(e_prev / e) / math.log(h_prev / h)


def convergence_study(run: Callable[[int], tuple[float, float, float]], levels: int) -> list[ConvergenceRow]:
    """
    Run the operation under test on refinement levels 0..levels-1.

    run(level) returns (h, max_norm, l2_norm). Norms that fail to decrease are
    flagged and reported, not raised.
    """
    if levels < 3:
        raise ValueError(f"A convergence study needs at least 3 levels, got {levels}")
    rows: list[ConvergenceRow] = []
    for level in range(levels):
        h, max_norm, l2_norm = run(level)
        console.print(f"[dim]level {level}: h={h:.4g} max={max_norm:.3e} l2={l2_norm:.3e}[/dim]")
        if not rows:
            rows.append(ConvergenceRow(level, h, max_norm, l2_norm))
            continue
        prev = rows[-1]
        order = observed_order(prev.max_norm, max_norm, prev.h, h)
        monotone = max_norm <= prev.max_norm
        if not monotone:
            console.print(f"[yellow]Norm increased from level {level - 1} to {level}[/yellow]")
        rows.append(ConvergenceRow(level, h, max_norm, l2_norm, order, monotone))
    return rows


def asymptotic_order(rows: list[ConvergenceRow]) -> float | None:
    """Observed order between the two finest levels."""
    return rows[-1].observed_order if rows else None


def rows_to_csv(rows: list[ConvergenceRow]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        order = "" if row.observed_order is None else f"{row.observed_order:.6f}"
        writer.writerow([row.level, f"{row.h:.6e}", f"{row.max_norm:.6e}", f"{row.l2_norm:.6e}", order])
    return buffer.getvalue()


def rows_to_dicts(rows: list[ConvergenceRow]) -> list[dict]:
    return [
        {
            "level": row.level,
            "h": row.h,
            "max_norm": row.max_norm,
            "l2_norm": row.l2_norm,
            "observed_order": row.observed_order,
            "monotone": row.monotone,
        }
        for row in rows
    ]

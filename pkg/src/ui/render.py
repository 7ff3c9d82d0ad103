from rich.console import Console
from rich.panel import Panel
from rich.table import Table

from src.numerics.convergence import ConvergenceRow
from src.solver.determining import ClassificationReport

# Status and tables go to stderr so stdout carries only machine output.
console = Console(stderr=True)


def print_classification_summary(report: ClassificationReport):
    """
    Renders the classification summary in a table.
    """
    table = Table(show_header=True, header_style="bold magenta", title="Classification")
    table.add_column("Quantity", style="dim")
    table.add_column("Value", justify="right")

    spec = report.spec
    table.add_row("ansatz", f"n={spec.n} deg_t={spec.deg_t} deg_x={spec.deg_x} deg_y={spec.deg_y}")
    if spec.uses_jets:
        table.add_row("jet ansatz", f"{', '.join(spec.jet_vars)} up to degree {spec.jet_deg}")
    table.add_row("unknowns", str(report.unknown_count))
    table.add_row("rank", str(report.rank))
    table.add_row("dimension", str(report.dimension))
    if report.expected_dimension is not None:
        style = "green" if report.dimension_matches and report.family_in_span else "yellow"
        table.add_row("expected (family)", f"[{style}]{report.expected_dimension}[/{style}]")
    verified = sum(1 for e in report.entries if e.verified)
    style = "green" if report.all_verified else "red"
    table.add_row("verified", f"[{style}]{verified}/{len(report.entries)}[/{style}]")
    table.add_row("time", f"{report.elapsed:.2f}s")

    console.print(table)


def print_convergence_table(rows: list[ConvergenceRow], title: str = "Convergence"):
    table = Table(show_header=True, header_style="bold magenta", title=title)
    table.add_column("Level", style="dim", width=6)
    table.add_column("h", justify="right")
    table.add_column("max", justify="right")
    table.add_column("L2", justify="right")
    table.add_column("order", justify="right")

    for row in rows:
        order = "n/a" if row.observed_order is None else f"{row.observed_order:.2f}"
        if not row.monotone:
            order = f"[yellow]{order}[/yellow]"
        table.add_row(str(row.level), f"{row.h:.4g}", f"{row.max_norm:.3e}", f"{row.l2_norm:.3e}", order)

    console.print(table)


def print_verdict(ok: bool, message: str):
    style = "green" if ok else "yellow"
    console.print(f"[{style}]{message}[/{style}]")


def print_error(message: str):
    """
    Renders an error message in a red panel.
    """
    console.print(Panel(message, title="Error", style="bold red"))

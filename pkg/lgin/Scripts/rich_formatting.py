from typing import List, Optional

from rich.console import Console
from rich.table import Table
from rich.panel import Panel
from rich.columns import Columns

from lgin.Scripts.validation_utils import AnalysisReport

# stdout is reserved for JSON/CSV output
console = Console(stderr=True)

LABEL_STYLE = {"LAS": "green", "Saddle": "red", "Nonhyperbolic": "yellow"}

def _fmt(v: Optional[float], digits: int = 6) -> str:
    return "-" if v is None else f"{v:.{digits}g}"

def display_report(report: AnalysisReport, target: Optional[Console] = None):
    # PANEL LAYOUT:
    # --------------------------------
    #   Title Panel
    #   Parameters | Uniqueness (side by side)
    #   Equilibria Table
    #   Theorem Checks Table
    # --------------------------------
    out = target or console
    p = report.params
    eqs = report.equilibria

    out.print(Panel("[bold cyan]LGIN Analysis[/bold cyan]", border_style="blue", title_align="left"))

    params_text = "\n".join(f"[bold]{k}:[/bold] {v:.6g}" for k, v in p.to_dict().items())
    uniq = report.uniqueness
    uniq_text = (
        f"[bold]condA:[/bold] {uniq.condA}\n"
        f"[bold]condB:[/bold] {uniq.condB}\n"
        f"[bold]Guaranteed unique:[/bold] {uniq.guaranteed}\n"
        f"[bold]GAS certified:[/bold] {report.gas_certified}\n"
        f"[bold]Prediction:[/bold] {eqs.prediction.kind.value}"
    )
    out.print(Columns([
        Panel(params_text, title="Parameters", border_style="blue"),
        Panel(uniq_text, title="Global Behaviour", border_style="cyan"),
    ], equal=True))

    table = Table(show_lines=True)
    table.add_column("#", justify="center")
    table.add_column("x", justify="right")
    table.add_column("y", justify="right")
    table.add_column("lambda1", justify="right")
    table.add_column("lambda2", justify="right")
    table.add_column("s1 - s2", justify="right")
    table.add_column("Order", justify="center")
    table.add_column("Label", style="bold")
    for i, e in enumerate(eqs.nonneg, start=1):
        label = e.label.value if e.label else "-"
        style = LABEL_STYLE.get(label, "white")
        table.add_row(
            str(i), _fmt(e.point.x, 10), _fmt(e.point.y, 10),
            _fmt(e.eig.lambda1 if e.eig else None), _fmt(e.eig.lambda2 if e.eig else None),
            _fmt(e.slopes.gap if e.slopes else None), str(e.contact_order),
            f"[{style}]{label}[/{style}]",
        )
    out.print(Panel.fit(table, title=f"Nonnegative Equilibria ({eqs.count})", border_style="green"))

    checks = Table(show_lines=True)
    checks.add_column("Check", style="bold magenta")
    checks.add_column("Result", justify="center")
    checks.add_column("Detail")
    for c in report.theorem_checks:
        mark = "[green]✓[/green]" if c.passed else "[red]✗[/red]"
        checks.add_row(c.name, mark, c.detail)
    out.print(Panel.fit(checks, title="Theorem Checks", border_style="magenta"))
    return

def display_scan_summary(counts: dict, violations: List[str], target: Optional[Console] = None):
    out = target or console
    table = Table(show_lines=True)
    table.add_column("Equilibria", style="bold")
    table.add_column("Draws", justify="center")
    for k in sorted(counts):
        table.add_row(str(k), str(counts[k]))
    out.print(Panel.fit(table, title="Scan Summary", border_style="blue"))
    if violations:
        out.print(Panel("\n".join(violations[:20]), title=f"Violations ({len(violations)})", border_style="red"))
    return

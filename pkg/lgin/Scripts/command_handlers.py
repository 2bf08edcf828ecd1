import logging
from typing import List, Optional

import numpy as np
import pandas as pd
import typer
from rich.console import Console

from lgin.Scripts.common import RegimeError
from lgin.Scripts.dynamics import basin_grid, iterate, separatrix
from lgin.Scripts.equilibria import BehaviorKind, find_equilibria
from lgin.Scripts.heavy_analysis.parameter_scan import (
    count_histogram,
    records_to_frame,
    run_scan,
    scan_violations,
)
from lgin.Scripts.model import Box, ModelParams, Point
from lgin.Scripts.rich_formatting import display_report, display_scan_summary
from lgin.Scripts.summary_utils import report_to_json, save_report
from lgin.Scripts.validation_utils import build_analysis_report
from working.working_utils import frame_to_csv, save_csv

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_FINDING = 2


def _emit_csv(console: Console, df: pd.DataFrame, out: Optional[str], comments: Optional[List[str]] = None) -> int:
    # CSV to a file (atomic) or to stdout
    if out is None:
        typer.echo(frame_to_csv(df, comments), nl=False)
        return EXIT_OK
    res = save_csv(df, out, comments)
    if not res["ok"]:
        console.print(f"[bold red]{res['message']}[/bold red]")
        return EXIT_INPUT
    console.print(f"[bold green]✓[/bold green] {res['message']} → {res['path']}")
    return EXIT_OK


def handle_analyze(console: Console, p: ModelParams, out: Optional[str], gas: bool = True, quiet: bool = False) -> int:
    """
    Analyze one parameter set and write the JSON report.

    Returns:
        0 when every theorem check passes, 2 when any fails
    """
    report = build_analysis_report(p, gas=gas)
    if not quiet:
        display_report(report, console)

    if out is None:
        typer.echo(report_to_json(report))
    else:
        res = save_report(report, out)
        if not res["ok"]:
            console.print(f"[bold red]{res['message']}[/bold red]")
            return EXIT_INPUT
        console.print(f"[bold green]✓[/bold green] {res['message']}")

    if not report.all_passed:
        console.print(f"[bold yellow]Failed checks: {', '.join(report.failed())}[/bold yellow]")
        return EXIT_FINDING
    return EXIT_OK


def handle_simulate(
    console: Console, p: ModelParams, start: Point, steps: int, tol: Optional[float], out: Optional[str],
) -> int:
    traj = iterate(p, start, max_n=steps, tol=tol)
    df = pd.DataFrame(
        {"n": range(len(traj.points)), "x": [pt.x for pt in traj.points], "y": [pt.y for pt in traj.points]},
        columns=["n", "x", "y"],
    )
    comments = [f"cauchy_tail={traj.cauchy_tail!r}"]
    if traj.limit is not None:
        comments.append(f"limit={traj.limit.x!r},{traj.limit.y!r}")
    else:
        console.print(f"[yellow]No convergence within {steps} steps[/yellow]")
    if traj.monotone_onset is not None:
        comments.append(f"monotone_onset={traj.monotone_onset}")
    return _emit_csv(console, df, out, comments)


def handle_basin(
    console: Console,
    p: ModelParams,
    bounds: Box,
    nx: int,
    ny: int,
    out: Optional[str],
    with_separatrix: bool = False,
    separatrix_out: Optional[str] = None,
    separatrix_nx: int = 101,
) -> int:
    eqs = find_equilibria(p)
    if with_separatrix and eqs.prediction.kind is not BehaviorKind.BISTABLE:
        raise RegimeError(
            f"--separatrix needs three equilibria (Bistable); this instance is {eqs.prediction.kind.value}")

    grid = basin_grid(p, bounds, nx, ny, eqs=eqs)
    gx, gy = np.meshgrid(grid.xs, grid.ys)
    df = pd.DataFrame({"x": gx.ravel(), "y": gy.ravel(), "label": grid.labels.ravel()}, columns=["x", "y", "label"])
    comments = [f"equilibrium_{i}={e.point.x!r},{e.point.y!r}" for i, e in enumerate(eqs.nonneg, start=1)]
    code = _emit_csv(console, df, out, comments)
    if code != EXIT_OK or not with_separatrix:
        return code

    sep = separatrix(p, eqs, separatrix_nx)
    sep_df = pd.DataFrame(sep.samples, columns=["x", "ystar"])
    sep_comments = [
        f"bracket_width={sep.bracket_width!r}",
        f"saddle_error={sep.saddle_error!r}",
        f"local_slope={sep.local_slope!r}",
        f"eigen_slope={sep.eigen_slope!r}",
    ] + [f"absent x={x!r}: {why}" for x, why in sep.absent]
    return _emit_csv(console, sep_df, separatrix_out or "separatrix.csv", sep_comments)


def handle_scan(console: Console, params: List[ModelParams], jobs: int, out: Optional[str]) -> int:
    records = run_scan(params, jobs=jobs)
    code = _emit_csv(console, records_to_frame(records), out)
    violations = scan_violations(records)
    display_scan_summary(count_histogram(records), violations, console)
    if code != EXIT_OK:
        return code
    return EXIT_FINDING if violations else EXIT_OK

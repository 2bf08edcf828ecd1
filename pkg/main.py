import sys
import logging
from typing import Annotated, Dict, List, Optional

try:  # newer typer vendors click as typer._click
    from typer import _click as click
except ImportError:
    import click
import typer
from rich.console import Console
from rich.logging import RichHandler

from lgin.Scripts.command_handlers import (
    EXIT_INPUT,
    handle_analyze,
    handle_basin,
    handle_scan,
    handle_simulate,
)
from lgin.Scripts.common import LGINError, ValidationError
from lgin.Scripts.heavy_analysis.parameter_scan import DEFAULT_RANGE, draw_params, grid_params
from lgin.Scripts.model import Box, Point
from lgin.Scripts.parse import parse_bounds, parse_grid_spec, resolve_params

# stdout carries JSON/CSV only
console = Console(stderr=True)

app = typer.Typer(
    add_completion=False,
    no_args_is_help=True,
    help="Equilibria, stability and basins of the Leslie-Gower map with immigration.",
)

# ---------------------------
# shared parameter options
# ---------------------------
ParamsFile = Annotated[Optional[str], typer.Option("--params", help="JSON file with the parameters")]
B1 = Annotated[Optional[float], typer.Option("--b1")]
B2 = Annotated[Optional[float], typer.Option("--b2")]
C1 = Annotated[Optional[float], typer.Option("--c1", help="normalized competition coefficient")]
C2 = Annotated[Optional[float], typer.Option("--c2", help="normalized competition coefficient")]
H1n = Annotated[Optional[float], typer.Option("--h1", help="normalized immigration")]
H2n = Annotated[Optional[float], typer.Option("--h2", help="normalized immigration")]
Raw = Annotated[bool, typer.Option("--raw", help="read the eight raw parameters instead")]
C11 = Annotated[Optional[float], typer.Option("--c11")]
C12 = Annotated[Optional[float], typer.Option("--c12")]
C21 = Annotated[Optional[float], typer.Option("--c21")]
C22 = Annotated[Optional[float], typer.Option("--c22")]
H1r = Annotated[Optional[float], typer.Option("--H1", help="raw immigration of species 1")]
H2r = Annotated[Optional[float], typer.Option("--H2", help="raw immigration of species 2")]
Out = Annotated[Optional[str], typer.Option("--out", help="write to this file instead of stdout")]


def _values(**kw: Optional[float]) -> Dict[str, Optional[float]]:
    return kw


def _fail(message: str) -> None:
    console.print(f"[bold red]Error:[/bold red] {message}")
    raise typer.Exit(code=EXIT_INPUT)


@app.callback()
def configure(
    verbose: Annotated[int, typer.Option("--verbose", "-v", count=True, help="-v info, -vv debug")] = 0,
):
    level = logging.WARNING if verbose == 0 else logging.INFO if verbose == 1 else logging.DEBUG
    logging.basicConfig(
        level=level,
        format="%(message)s",
        handlers=[RichHandler(console=Console(stderr=True), show_path=False)],
        force=True,
    )


# =============================
#       analyze
# =============================
@app.command()
def analyze(
    params: ParamsFile = None,
    b1: B1 = None, b2: B2 = None, c1: C1 = None, c2: C2 = None, h1: H1n = None, h2: H2n = None,
    raw: Raw = False,
    c11: C11 = None, c12: C12 = None, c21: C21 = None, c22: C22 = None, H1: H1r = None, H2: H2r = None,
    out: Out = None,
    gas: Annotated[bool, typer.Option("--gas/--no-gas", help="run the corner-envelope certificate")] = True,
    quiet: Annotated[bool, typer.Option("--quiet", "-q", help="no console panels")] = False,
):
    """Equilibria, classification and theorem checks as a JSON report."""
    try:
        values = _values(b1=b1, b2=b2, c1=c1, c2=c2, h1=h1, h2=h2,
                         c11=c11, c12=c12, c21=c21, c22=c22, H1=H1, H2=H2)
        p = resolve_params(params, values, raw=raw)
        code = handle_analyze(console, p, out, gas=gas, quiet=quiet)
    except LGINError as e:
        _fail(str(e))
    raise typer.Exit(code=code)


# =============================
#       simulate
# =============================
@app.command()
def simulate(
    params: ParamsFile = None,
    b1: B1 = None, b2: B2 = None, c1: C1 = None, c2: C2 = None, h1: H1n = None, h2: H2n = None,
    raw: Raw = False,
    c11: C11 = None, c12: C12 = None, c21: C21 = None, c22: C22 = None, H1: H1r = None, H2: H2r = None,
    x0: Annotated[float, typer.Option("--x0")] = 0.0,
    y0: Annotated[float, typer.Option("--y0")] = 0.0,
    steps: Annotated[int, typer.Option("--steps", help="maximum number of iterations")] = 1000,
    tol: Annotated[Optional[float], typer.Option("--tol", help="step size counted as converged")] = None,
    out: Out = None,
):
    """Iterate one orbit; CSV n,x,y with the limit in trailing comments."""
    try:
        values = _values(b1=b1, b2=b2, c1=c1, c2=c2, h1=h1, h2=h2,
                         c11=c11, c12=c12, c21=c21, c22=c22, H1=H1, H2=H2)
        p = resolve_params(params, values, raw=raw)
        if steps < 1:
            raise ValidationError("steps", "steps must be >= 1")
        if tol is not None and not tol > 0:
            raise ValidationError("tol", "tol must be > 0")
        code = handle_simulate(console, p, Point(x0, y0), steps, tol, out)
    except LGINError as e:
        _fail(str(e))
    raise typer.Exit(code=code)


# =============================
#       basin
# =============================
@app.command()
def basin(
    params: ParamsFile = None,
    b1: B1 = None, b2: B2 = None, c1: C1 = None, c2: C2 = None, h1: H1n = None, h2: H2n = None,
    raw: Raw = False,
    c11: C11 = None, c12: C12 = None, c21: C21 = None, c22: C22 = None, H1: H1r = None, H2: H2r = None,
    bounds: Annotated[Optional[str], typer.Option("--bounds", help="x_lo,x_hi,y_lo,y_hi")] = None,
    nx: Annotated[int, typer.Option("--nx")] = 50,
    ny: Annotated[int, typer.Option("--ny")] = 50,
    out: Out = None,
    with_separatrix: Annotated[bool, typer.Option("--separatrix", help="also trace the separatrix")] = False,
    separatrix_out: Annotated[str, typer.Option("--separatrix-out")] = "separatrix.csv",
    separatrix_nx: Annotated[int, typer.Option("--separatrix-nx")] = 101,
):
    """Basin labels on a grid (CSV x,y,label), optionally the separatrix (x,ystar)."""
    try:
        values = _values(b1=b1, b2=b2, c1=c1, c2=c2, h1=h1, h2=h2,
                         c11=c11, c12=c12, c21=c21, c22=c22, H1=H1, H2=H2)
        p = resolve_params(params, values, raw=raw)
        box = parse_bounds(bounds) if bounds else Box(0.0, p.h1 + p.b1, 0.0, p.h2 + p.b2)
        code = handle_basin(console, p, box, nx, ny, out, with_separatrix, separatrix_out, separatrix_nx)
    except LGINError as e:
        _fail(str(e))
    raise typer.Exit(code=code)


# =============================
#       scan
# =============================
@app.command()
def scan(
    draws: Annotated[Optional[int], typer.Option("--draws", help="number of log-uniform draws")] = None,
    grid: Annotated[Optional[List[str]], typer.Option("--grid", help="NAME=v1,v2 or NAME=lo:hi:n (repeatable)")] = None,
    seed: Annotated[int, typer.Option("--seed")] = 0,
    jobs: Annotated[int, typer.Option("--jobs", help="worker processes")] = 1,
    lo: Annotated[float, typer.Option("--lo", help="lower end of the draw range")] = DEFAULT_RANGE[0],
    hi: Annotated[float, typer.Option("--hi", help="upper end of the draw range")] = DEFAULT_RANGE[1],
    params: ParamsFile = None,
    b1: B1 = None, b2: B2 = None, c1: C1 = None, c2: C2 = None, h1: H1n = None, h2: H2n = None,
    out: Out = None,
):
    """One CSV row per parameter draw: count, labels, uniqueness conditions, certificate."""
    try:
        if (draws is None) == (not grid):
            raise ValidationError("draws", "give exactly one of --draws or --grid")
        if jobs < 1:
            raise ValidationError("jobs", "jobs must be >= 1")
        if draws is not None:
            plist = draw_params(draws, seed, lo, hi)
        else:
            base = resolve_params(params, _values(b1=b1, b2=b2, c1=c1, c2=c2, h1=h1, h2=h2))
            plist = grid_params(base, [parse_grid_spec(g) for g in grid])
        code = handle_scan(console, plist, jobs, out)
    except LGINError as e:
        _fail(str(e))
    raise typer.Exit(code=code)


def run(argv: Optional[List[str]] = None) -> int:
    # usage errors exit 1, like every other input error
    try:
        result = app(args=argv, prog_name="lgin", standalone_mode=False)
    except click.exceptions.UsageError as e:
        e.show(file=sys.stderr)
        return EXIT_INPUT
    except click.exceptions.Abort:
        console.print("[yellow]Aborted.[/yellow]")
        return EXIT_INPUT
    return result if isinstance(result, int) else 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()

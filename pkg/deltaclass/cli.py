"""deltaclass command line.

Exit codes: 0 clean, 1 violations (or Inconclusive/non-concordant under
--strict), 2 usage or parameter errors, 3 input/output errors.
"""

from __future__ import annotations

import sys
from typing import Any, NoReturn

import click
from dotenv import load_dotenv
from pydantic import ValidationError

from deltaclass.config import LARGE_K
from deltaclass.exceptions import (
    DeltaclassError,
    InsufficientDataError,
    NonIntegralError,
    ReportIOError,
    SequenceParseError,
)
from deltaclass.formats import write_atomic
from deltaclass.logger import get_logger, set_level
from deltaclass.models import RunConfig
from deltaclass.runner import execute, replay

EXIT_CLEAN = 0
EXIT_VIOLATIONS = 1
EXIT_USAGE = 2
EXIT_IO = 3

# non-integer samples and windows the data does not reach are input problems
INGEST_ERRORS = (SequenceParseError, ReportIOError, NonIntegralError, InsufficientDataError)

LEVELS = click.Choice(["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"], case_sensitive=False)


def _fail(message: str, code: int) -> NoReturn:
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _run(command: str, **fields: Any) -> None:
    """Build a RunConfig, execute it and map the outcome to an exit code."""
    fields = {k: v for k, v in fields.items() if v is not None and v != ()}
    for key in ("primes", "n_values", "K_values", "p1", "p2"):
        if key in fields:
            fields[key] = list(fields[key])
    try:
        config = RunConfig(command=command, **fields)
    except ValidationError as e:
        _fail(f"invalid options: {e.error_count()} errors\n{e}", EXIT_USAGE)
    except DeltaclassError as e:
        _fail(str(e), EXIT_USAGE)

    logger = get_logger()
    try:
        report, text = execute(config, logger)
        if config.output_path:
            write_atomic(config.output_path, text)
        else:
            click.echo(text, nl=False)
    except INGEST_ERRORS as e:
        _fail(str(e), EXIT_IO)
    except DeltaclassError as e:
        _fail(str(e), EXIT_USAGE)

    if report is None:
        sys.exit(EXIT_CLEAN)
    if report.violations:
        sys.exit(EXIT_VIOLATIONS)
    if config.strict and not report.clean:
        sys.exit(EXIT_VIOLATIONS)
    sys.exit(EXIT_CLEAN)


def output_options(func):
    func = click.option("--workers", type=int, help="Worker processes (default: all cores).")(func)
    func = click.option(
        "--strict", is_flag=True, help="Treat Inconclusive or non-concordant results as failures."
    )(func)
    func = click.option("--output", "output_path", type=click.Path(dir_okay=False), help="Report file.")(func)
    return func


def input_options(func):
    func = click.option(
        "--format", "input_format", type=click.Choice(["bfile", "json"]),
        help="Sequence format (default: from the file extension).",
    )(func)
    func = click.argument("input_path", type=click.Path(dir_okay=False))(func)
    return func


@click.group()
@click.option("--log-level", type=LEVELS, help="Overrides DELTACLASS_LOG_LEVEL.")
@click.version_option(package_name="python-deltaclass")
def cli(log_level: str | None):
    """Classify integer sequences and audit their difference-calculus estimates."""
    if log_level:
        set_level(log_level)


@cli.command()
@input_options
@output_options
@click.option("--K", "K", type=int, help="Window ratio of the vanishing scan (default 2).")
@click.option("--large-k", is_flag=True, help=f"Use K = {LARGE_K}.")
@click.option("--cut", type=int, help="Explicit cut B.")
@click.option("--require-integer", is_flag=True, help="Non-integer samples force Inconclusive.")
def classify(large_k: bool, K: int | None, **kwargs):
    """Classify a sequence as polynomial, P1 + P2*2^x, or Inconclusive."""
    if large_k:
        K = LARGE_K
    _run("classify", K=K, **kwargs)


@cli.command()
@input_options
@output_options
@click.option("--k", "k", type=int, required=True, help="Concordance level.")
@click.option("--lo", type=int, help="Window start (default: first index).")
@click.option("--hi", type=int, help="Window end (default: last index).")
@click.option("--seed", type=int, help="Seed for sampled scans.")
@click.option("--samples", type=int, help="Subsets drawn in sampled scans.")
@click.option("--exhaustive", is_flag=True, help="Never sample.")
@click.option("--prime", "primes", type=int, multiple=True, help="Prime for the Delta^(kp) congruence.")
@click.option("--n-max", type=int, help="Largest order of the primorial divisibility check.")
@click.option("--a-max", type=int, help="Largest evaluation point of the consequence checks.")
def concord(**kwargs):
    """Scan a window for k-concordance and check its divisibility consequences."""
    _run("concord", **kwargs)


@cli.group()
def verify():
    """Exact and numerical verification grids."""


@verify.command()
@output_options
@click.option("--p-max", type=int, help="Largest prime (default 31).")
@click.option("--k-max", type=int, help="Largest k (default 5).")
@click.option("--ell-max", type=int, help="Largest exponent (default 8).")
def cmain(**kwargs):
    """Binomial congruences modulo p^k."""
    _run("verify-cmain", **kwargs)


@verify.command()
@output_options
@click.option("--prime", "primes", type=int, multiple=True, help="Odd prime (default 3, 5, 7, 11, 13).")
@click.option("--m-max", type=int, help="Largest M (default 25).")
@click.option("--p-max", type=int, help="Largest prime for the (1 - zeta)^(p-1) witness (default 31).")
@click.option("--convention", type=click.Choice(["full", "trace"]), help="Left side of the identity.")
def trace(**kwargs):
    """Cyclotomic trace identity and (1 - zeta)^(p-1) = p y."""
    _run("verify-trace", **kwargs)


@verify.command()
@output_options
@click.option("--a-max", type=int, help="Largest a (default 10).")
def gpoly(**kwargs):
    """Coefficient vanishing and bounds of Delta^a G."""
    _run("verify-gpoly", **kwargs)


@verify.command()
@output_options
@click.option("--n", "n_values", type=int, multiple=True, help="Contour radius n (default 4..64).")
@click.option("--mu-max", type=int, help="Cap on mu (default 8).")
@click.option("--precision", type=int, help="Significant digits (default 60).")
@click.option("--simpson-nodes", type=int, help="Nodes of the fixed-step cross-check.")
def integral(**kwargs):
    """Arc and segment integral bounds with b = d = 100."""
    _run("verify-integral", **kwargs)


@verify.command()
@output_options
@click.option("--K", "K_values", type=int, multiple=True, help="K (default 2, 3, 4).")
@click.option("--a-max", type=int, help="Largest a (default 10).")
@click.option("--precision", type=int, help="Significant digits (default 60).")
def error(**kwargs):
    """Error chain for e^(-Kx)."""
    _run("verify-error", **kwargs)


@verify.command()
@output_options
@click.option("--K", "K_values", type=int, multiple=True, help="K (default 20, 100).")
@click.option("--a-max", type=int, help="Largest a (default 8).")
@click.option("--base", help="Base C of the polynomial decay audit (num/den allowed).")
@click.option("--k", "k", type=int, help="Harmonic index for --base (default 1).")
@click.option("--precision", type=int, help="Significant digits (default 60).")
def decay(**kwargs):
    """Decay of mixed differences on c^x and of Delta^n C^x."""
    _run("verify-decay", **kwargs)


@cli.command()
@click.option("--p1", multiple=True, help="Coefficient of P1, lowest degree first (num/den allowed).")
@click.option("--p2", multiple=True, help="Coefficient of P2, lowest degree first.")
@click.option("--start", type=int, required=True, help="First index.")
@click.option("--length", type=int, required=True, help="Number of samples.")
@click.option("--perturb-index", type=int, help="Index of a single perturbed sample.")
@click.option("--perturb-delta", help="Perturbation amount (default 1).")
@click.option("--format", "input_format", type=click.Choice(["bfile", "json"]), help="Output format.")
@click.option("--output", "output_path", type=click.Path(dir_okay=False), help="Sequence file.")
def gen(**kwargs):
    """Synthesize P1(a) + P2(a) * 2^a on a window."""
    _run("gen", **kwargs)


@cli.command("replay")
@click.argument("report_path", type=click.Path(dir_okay=False))
def replay_command(report_path: str):
    """Re-run a report's embedded configuration and compare bytes."""
    try:
        identical, _, _ = replay(report_path, get_logger())
    except INGEST_ERRORS as e:
        _fail(str(e), EXIT_IO)
    except DeltaclassError as e:
        _fail(str(e), EXIT_USAGE)
    click.echo("identical" if identical else "differs")
    sys.exit(EXIT_CLEAN if identical else EXIT_VIOLATIONS)


def main() -> None:
    load_dotenv()
    cli()


if __name__ == "__main__":
    main()

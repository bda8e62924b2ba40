"""
Command-line interface for lfwave scripts.

Commands:
    lfwave run SCRIPT        - Execute a script, JSON lines on stdout and a summary on stderr
    lfwave print SCRIPT      - Print the canonical text of a script
    lfwave scripts           - List the bundled scripts

Exit status: 0 when every check meets its expectation, 1 when a check fails or a verdict
raises, 2 for usage and parse errors.
"""

import json
import sys
from importlib import resources

import click
from loguru import logger

from . import __version__
from .dsl import Script, ScriptError, parse, print_script
from .runner import ScriptRunner
from .ztrans import DEFAULT_WINDOW

# Configure loguru
logger.remove()
logger.add(sys.stderr, level="WARNING")

EXIT_USAGE = 2


def bundled_scripts() -> dict[str, str]:
    """Map bundled script names (file stem) to their text."""
    scripts = {}
    for entry in sorted(resources.files("lfwave").joinpath("scripts").iterdir(), key=lambda e: e.name):
        if entry.name.endswith(".lfw"):
            scripts[entry.name.removesuffix(".lfw")] = entry.read_text(encoding="utf-8")
    return scripts


def _load(source: str | None, bundled: str | None = None) -> Script:
    """Read and parse a script from a path, `-` for stdin, or a bundled name."""
    if bundled is not None:
        scripts = bundled_scripts()
        if bundled not in scripts:
            raise click.UsageError(f"no bundled script {bundled!r}; see `lfwave scripts`")
        text = scripts[bundled]
    elif source is None:
        raise click.UsageError("give a SCRIPT path, '-' or --bundled NAME")
    elif source == "-":
        text = sys.stdin.read()
    else:
        try:
            with open(source, encoding="utf-8") as f:
                text = f.read()
        except OSError as e:
            raise click.UsageError(f"cannot read {source}: {e.strerror}") from e
    return parse(text)


def _summary(record: dict) -> str:
    """One human-readable line for a record."""
    if record["kind"] == "builtin":
        status = "INFO"
    elif record["failed"]:
        status = "FAIL"
    else:
        status = "PASS"
    line = f"{status} line {record['line']}: {record['command']}"
    if "error" in record:
        return f"{line}\n    {record['error']}"
    result = record["result"]
    if record["kind"] == "check":
        line += f" -> ok={str(record['ok']).lower()} ({result['condition']})"
        if record["expect"] != "pass":
            line += " [expected fail]"
        if result["witness"] is not None:
            line += f"\n    witness: {json.dumps(result['witness'])}"
    return line


@click.group()
@click.option("-v", "--verbose", is_flag=True, help="Enable verbose output")
@click.option("--debug", is_flag=True, help="Enable debug logging")
@click.version_option(version=__version__)
def main(verbose: bool, debug: bool):
    """Exact harmonic analysis and multiwavelet checks on GF(q)((t)).

    Scripts declare a field, bind step sets and bandlimited functions, and run
    checks whose verdicts are printed as exact JSON.
    """
    if debug:
        logger.remove()
        logger.add(sys.stderr, level="DEBUG")
    elif verbose:
        logger.remove()
        logger.add(sys.stderr, level="INFO")


@main.command("run")
@click.argument("script", required=False, metavar="SCRIPT")
@click.option("--window", default=DEFAULT_WINDOW, type=click.IntRange(1, 8), show_default=True,
              help="Depth of exhaustive and windowed checks")
@click.option("--mode", type=click.Choice(["strict", "report"]), default="report", show_default=True,
              help="strict stops at the first failure, report runs everything")
@click.option("--approx", is_flag=True, help="Add decimal renderings (non-authoritative)")
@click.option("--bundled", metavar="NAME", help="Run a bundled script instead of SCRIPT")
def run(script: str | None, window: int, mode: str, approx: bool, bundled: str | None):
    """Execute SCRIPT (a path, or '-' for stdin).

    Examples:
        lfwave run checks.lfw
        lfwave run --bundled shannon --window 3
        cat checks.lfw | lfwave run - --mode strict
    """
    try:
        parsed = _load(script, bundled)
    except ScriptError as e:
        click.echo(f"Error: {e}", err=True)
        sys.exit(EXIT_USAGE)

    runner = ScriptRunner(parsed, window=window, approx=approx)
    try:
        for record in runner.run(strict=mode == "strict"):
            click.echo(json.dumps(record, sort_keys=True))
            click.echo(_summary(record), err=True)
    except Exception as e:
        logger.exception("Script aborted")
        click.echo(f"Error: {e}", err=True)
        sys.exit(1)

    if runner.failures:
        click.echo(f"{runner.failures} failed", err=True)
    sys.exit(runner.exit_code)


@main.command("print")
@click.argument("script", required=False, metavar="SCRIPT")
@click.option("--bundled", metavar="NAME", help="Print a bundled script instead of SCRIPT")
def print_command(script: str | None, bundled: str | None):
    """Print the canonical text of SCRIPT."""
    try:
        click.echo(print_script(_load(script, bundled)), nl=False)
    except ScriptError as e:
        click.echo(f"Error: {e}", err=True)
        sys.exit(EXIT_USAGE)


@main.command("scripts")
def list_scripts():
    """List the bundled scripts with their first comment line."""
    for name, text in bundled_scripts().items():
        first = text.lstrip().splitlines()[0] if text.strip() else ""
        description = first.lstrip("# ").strip() if first.startswith("#") else ""
        click.echo(f"{name:<20} {description}".rstrip())


if __name__ == "__main__":
    main()

import logging
import os
import sys
from functools import wraps
from pathlib import Path
from typing import Any, Callable, List, Optional

from dotenv import load_dotenv
import click

from dispatchengine.cli.config import CliConfig
from dispatchengine.core.engine import DispatchEngine
from dispatchengine.core.errors import ConfigError
from dispatchengine.emulation import (
    CurvePoint,
    accuracy_by_size,
    load_scenarios,
    mean_saved_by_size,
    run_emulation,
    run_shift_scenarios,
    shift_summary,
    write_curves_csv,
    write_emulation_csv,
)
from dispatchengine.metrics import (
    format_validation_table,
    is_monotone,
    load_metric_corpus,
    run_metric_validation,
    validation_table_json,
)

load_dotenv(dotenv_path=os.path.join(os.getcwd(), ".env"))

logger = logging.getLogger(__name__)

EXIT_CONFIG_ERROR = 2
EXIT_INTERNAL_ERROR = 3


def config_options(fn: Callable[..., Any]) -> Callable[..., Any]:
    """Options for config files, policy overrides and the seed."""
    options = [
        click.option("--tree", "tree_path", type=click.Path(path_type=Path), help="Phone tree JSON"),
        click.option(
            "--patterns", "patterns_path", type=click.Path(path_type=Path), help="Handover patterns JSON"
        ),
        click.option("--stubs", "stubs_path", type=click.Path(path_type=Path), help="Stub backend JSON"),
        click.option("--lambda1", type=float, help="Itemization confidence threshold"),
        click.option("--lambda2", type=float, help="Incident type confidence threshold"),
        click.option("--trials", type=int, help="Stochastic trials per decision"),
        click.option("--cap", type=int, help="Clarifications per field before handover"),
        click.option("--seed", type=int, default=0, show_default=True, help="Base seed"),
        click.option(
            "--backend",
            type=click.Choice(["stub", "api"]),
            default="stub",
            show_default=True,
            help="Model backend",
        ),
    ]
    for option in reversed(options):
        fn = option(fn)
    return fn


def handle_errors(fn: Callable[..., Any]) -> Callable[..., Any]:
    """Map ConfigError to exit code 2 and any other failure to exit code 3."""

    @wraps(fn)
    def wrapper(*args: Any, **kwargs: Any) -> Any:
        try:
            return fn(*args, **kwargs)
        except click.exceptions.Exit:
            raise
        except (ConfigError, FileNotFoundError) as e:
            click.echo(f"Config error: {e}", err=True)
            sys.exit(EXIT_CONFIG_ERROR)
        except Exception as e:
            logger.exception("Unexpected failure")
            click.echo(f"Error: {e}", err=True)
            sys.exit(EXIT_INTERNAL_ERROR)

    return wrapper


def build_engine(config: CliConfig) -> DispatchEngine:
    try:
        return DispatchEngine.from_files(
            tree_path=config.tree_path,
            handover_path=config.patterns_path,
            stubs_path=config.stubs_path,
            policy=config.policy(),
            seed=config.seed,
            backend=config.backend,
        )
    except ValueError as e:
        if isinstance(e, ConfigError):
            raise
        raise ConfigError(str(e)) from e


def parse_sizes(value: str) -> List[int]:
    """Parse "1-6" or "1,2,4" into a list of sizes."""
    sizes: List[int] = []
    try:
        for part in value.split(","):
            part = part.strip()
            if "-" in part:
                lo, hi = part.split("-", 1)
                sizes.extend(range(int(lo), int(hi) + 1))
            elif part:
                sizes.append(int(part))
    except ValueError as e:
        raise ConfigError(f"Invalid --sizes value '{value}'") from e
    if not sizes or any(s <= 0 for s in sizes):
        raise ConfigError(f"Utterance sizes must be positive, got '{value}'")
    return sizes


@click.group(name="dispatch-engine")
@click.option("--verbose", "-v", is_flag=True, help="Log per-turn decisions")
def cli(verbose: bool) -> None:
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )


@cli.command(
    "check",
    help="""Check if dispatchengine library is installed""",
)
def cli_check() -> None:
    try:
        import dispatchengine

        click.echo("dispatchengine library is successfully installed!")
        click.echo(
            f"Version: {dispatchengine.__version__ if hasattr(dispatchengine, '__version__') else 'Unknown'}"
        )
    except ImportError:
        click.echo("Error: dispatchengine library is not installed or cannot be imported.")
        click.echo("Please use 'pip install dispatch-engine' to install the library.")


@cli.command("session", help="Run an interactive text session over stdin/stdout")
@config_options
@click.option("--transcript", type=click.Path(path_type=Path), help="Write the NDJSON transcript here")
@click.option("--report", "report_path", type=click.Path(path_type=Path), help="Write the report JSON here")
@handle_errors
def cli_session(
    transcript: Optional[Path], report_path: Optional[Path], **options: Any
) -> None:
    config = CliConfig.from_options(**options)
    engine = build_engine(config)
    session = engine.start_session()
    click.echo(f"System: {session.transcript[-1].text}")

    stdin = click.get_text_stream("stdin")
    while session.active:
        line = stdin.readline()
        if not line:
            break
        text = line.strip()
        if not text:
            continue
        click.echo(f"Caller: {text}")
        outcome = engine.step(session, text)
        click.echo(f"System: {outcome.prompt}")

    click.echo(session.report.to_json())
    click.echo(f"termination: {session.termination_reason or 'caller disconnected'}")
    if transcript is not None:
        session.write_transcript(transcript)
    if report_path is not None:
        report_path.write_text(session.report.to_json(), encoding="utf-8")


@cli.command("emulate", help="Run emulated calls and write saved-turns and confidence CSVs")
@config_options
@click.option("--scenarios", "scenarios_path", type=click.Path(path_type=Path), help="Scenario JSON")
@click.option("--sizes", default="1-6", show_default=True, help='Utterance sizes, e.g. "1-6" or "1,3"')
@click.option("--runs", default=100, show_default=True, type=int, help="Seeds per size")
@click.option("--workers", default=4, show_default=True, type=int, help="Worker threads")
@click.option("--shift", is_flag=True, help="Also replay the shift scenarios")
@click.option("--plot", is_flag=True, help="Write PNG figures (needs the plot extra)")
@click.option("--out", "out_dir", type=click.Path(path_type=Path), default=Path("."), show_default=True)
@handle_errors
def cli_emulate(
    scenarios_path: Optional[Path],
    sizes: str,
    runs: int,
    workers: int,
    shift: bool,
    plot: bool,
    out_dir: Path,
    **options: Any,
) -> None:
    config = CliConfig.from_options(out_dir=out_dir, **options)
    size_list = parse_sizes(sizes)
    if runs <= 0 or workers <= 0:
        raise ConfigError("--runs and --workers must be positive")
    engine = build_engine(config)
    scenarios = load_scenarios(engine.tree, scenarios_path)
    out_dir.mkdir(parents=True, exist_ok=True)

    reports = run_emulation(engine, scenarios, size_list, runs, workers)
    write_emulation_csv(reports, out_dir / "emulation.csv")
    saved = mean_saved_by_size(reports)
    accuracy = accuracy_by_size(reports)
    click.echo(f"{'size':>4} {'saved_turns':>12} {'accuracy':>9}")
    for size in saved:
        click.echo(f"{size:>4} {saved[size]:>12.3f} {accuracy[size]:>9.3f}")

    curves: List[CurvePoint] = []
    if shift:
        replays, curves = run_shift_scenarios(scenarios, engine)
        write_curves_csv(curves, out_dir / "confidence_curves.csv")
        for run in replays:
            summary = shift_summary(run)
            status = "ok" if summary.handled else "MISSED"
            click.echo(
                f"{summary.scenario_id}: shift={summary.shift_turn} "
                f"confirmed={summary.confirmed_turn} demoted={summary.demoted_turn} {status}"
            )

    if plot:
        from dispatchengine.emulation.plotting import plot_confidence_curves, plot_saved_turns

        plot_saved_turns(reports, out_dir / "saved_turns.png")
        if curves:
            plot_confidence_curves(
                curves, out_dir / "confidence_curves.png", threshold=engine.policy.lambda2
            )

    unfinished = [r for r in reports if not r.terminated]
    if unfinished:
        click.echo(f"{len(unfinished)} emulated session(s) did not terminate", err=True)
        sys.exit(EXIT_INTERNAL_ERROR)


@cli.command("metric", help="Validate the consistency metric on a three-group corpus")
@click.option("--corpus", "corpus_path", type=click.Path(path_type=Path), help="Metric corpus TSV")
@click.option("--json", "as_json", is_flag=True, help="Print JSON instead of a table")
@handle_errors
def cli_metric(corpus_path: Optional[Path], as_json: bool) -> None:
    table = run_metric_validation(load_metric_corpus(corpus_path))
    if as_json:
        click.echo(validation_table_json(table))
        return
    click.echo(format_validation_table(table))
    click.echo(f"consistency monotone: {is_monotone(table)}")


@cli.command("validate-config", help="Load and validate every config file")
@config_options
@click.option("--scenarios", "scenarios_path", type=click.Path(path_type=Path), help="Scenario JSON")
@handle_errors
def cli_validate_config(scenarios_path: Optional[Path], **options: Any) -> None:
    config = CliConfig.from_options(**options)
    engine = build_engine(config)
    scenarios = load_scenarios(engine.tree, scenarios_path)
    click.echo(
        f"OK: {len(engine.tree.incident_types)} incident types, {len(engine.tree.fields)} fields, "
        f"{len(engine.handover.patterns)} handover patterns, {len(scenarios)} scenarios"
    )


if __name__ == "__main__":
    cli()

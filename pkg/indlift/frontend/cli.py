"""Command line interface for the indlift system."""
import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional, Sequence

from indlift import __version__
from indlift.backend.commands import (
    CommandHistory,
    ListRegistryCommand,
    ReplayFixtureCommand,
    RunSuiteCommand,
)
from indlift.backend.config import SuiteConfig, load_settings, load_suite_config
from indlift.backend.errors import IndliftError, ReplayMismatchError
from indlift.backend.services import SuiteService
from indlift.backend.utils import canonical_dumps

logger = logging.getLogger(__name__)

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

EXIT_OK = 0
EXIT_UNEXPECTED = 1
EXIT_ERROR = 2


def build_parser() -> argparse.ArgumentParser:
    """The argument parser for run, replay and list."""
    parser = argparse.ArgumentParser(
        prog="indlift", description="Check and lift independence relations at finite scope."
    )
    parser.add_argument("--version", action="version", version=f"indlift {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="log at DEBUG level")
    parser.add_argument("--env-file", help="read INDLIFT_* settings from this file")
    commands = parser.add_subparsers(dest="command", required=True)

    run = commands.add_parser("run", help="run a shipped suite or a suite config")
    source = run.add_mutually_exclusive_group(required=True)
    source.add_argument("--suite", help="name of a shipped suite")
    source.add_argument("--config", help="path of a JSON suite config")
    run.add_argument("--scope-size", type=int, help="largest object size to enumerate")
    run.add_argument("--completion-size", type=int, help="largest completion size to search")
    run.add_argument("--format", choices=("json", "text"), help="report format")
    run.add_argument("--out", help="write the report here instead of stdout")

    replay = commands.add_parser("replay", help="replay stored fixtures")
    replay.add_argument("paths", nargs="*", help="fixture files or shipped fixture names")
    replay.add_argument("--all", action="store_true", help="replay every shipped fixture")

    listing = commands.add_parser("list", help="show the registry catalogue")
    listing.add_argument("--format", choices=("json", "text"), default="text")
    return parser


def _rescope(config: SuiteConfig, size: Optional[int], completion: Optional[int]) -> SuiteConfig:
    update = {}
    if size is not None:
        update["max_object_size"] = size
    if completion is not None:
        update["max_completion_size"] = completion
    if not update:
        return config
    checks = [
        c.model_copy(update={"scope": c.scope.model_copy(update=update)}) if c.scope else c
        for c in config.checks
    ]
    return config.model_copy(
        update={"scope": config.scope.model_copy(update=update), "checks": checks}
    )


def _fixture_paths(names: Sequence[str], everything: bool) -> List[Path]:
    if everything:
        return sorted(FIXTURES.glob("*.json"))
    paths = []
    for name in names:
        path = Path(name)
        if not path.exists() and (FIXTURES / f"{name}.json").exists():
            path = FIXTURES / f"{name}.json"
        paths.append(path)
    return paths


def _run(args: argparse.Namespace, service: SuiteService, history: CommandHistory) -> int:
    if args.suite:
        config = service.registry.suite(args.suite)
    else:
        config = load_suite_config(args.config)
    config = _rescope(config, args.scope_size, args.completion_size)
    command = RunSuiteCommand(service, config, args.out, args.format)
    history.execute_command(command)
    if command.out is None and command.rendered is not None:
        sys.stdout.write(command.rendered)
    assert command.report is not None
    if command.report.errors:
        return EXIT_ERROR
    return EXIT_OK if command.report.ok else EXIT_UNEXPECTED


def _replay(args: argparse.Namespace, service: SuiteService, history: CommandHistory) -> int:
    paths = _fixture_paths(args.paths, args.all)
    if not paths:
        logger.error("no fixtures given")
        return EXIT_ERROR
    status = EXIT_OK
    for path in paths:
        command = ReplayFixtureCommand(service, str(path))
        try:
            history.execute_command(command)
        except ReplayMismatchError as exc:
            sys.stdout.write(f"{path.name}: mismatch\n")
            logger.error("%s", exc)
            status = EXIT_UNEXPECTED
            continue
        assert command.verdict is not None
        sys.stdout.write(f"{path.name}: {command.verdict.status.value} reproduced\n")
    return status


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Run the indlift command line and return its exit code."""
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    history = CommandHistory()
    try:
        service = SuiteService(settings=load_settings(args.env_file))
        if args.command == "run":
            return _run(args, service, history)
        if args.command == "replay":
            return _replay(args, service, history)
        command = ListRegistryCommand(service, args.format)
        history.execute_command(command)
        sys.stdout.write(command.rendered or "")
        return EXIT_OK
    except IndliftError as exc:
        sys.stderr.write(
            canonical_dumps({"error": type(exc).__name__, "message": str(exc), "details": exc.details})
        )
        return EXIT_ERROR

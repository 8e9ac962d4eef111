#!/usr/bin/env python3
"""
CLI for multitrace - run the workflows without the MCP transport

Usage:
  multitrace list-tools                            # Show MCP tool definitions
  multitrace witness fixtures/folium.sys           # Witness set (default dims)
  multitrace witness fixtures/curve12.sys --dims 0 1
  multitrace witness fixtures/curve12.sys --collection 1 --out w.json
  multitrace decompose fixtures/ellipse_folium.sys # Monodromy + trace test
  multitrace mtrace fixtures/curve12.sys w.json    # Multihomogeneous trace test
  multitrace multidegree fixtures/cremona2.sys

Shared flags: --seed, --tol, --threads, --out, -v
Exit codes: 0 success/certified, 1 input error, 2 numerical or certification failure

Calls handlers.py directly (no MCP transport layer)
"""

import argparse
import json
import sys
from pathlib import Path
from typing import Any

from multitrace.common.constants import DEFAULT_SEED, MONODROMY_BUDGET, TRACE_TOL
from multitrace.common.errors import InputError, MultitraceError, NumericalError

from .formatters import format_json, format_summary
from .handlers import dispatch
from .logging_config import get_logger, level_for, setup_async_logging, shutdown_async_logging
from .tools import get_mcp_tools

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_NUMERICAL = 2


def list_tools_command() -> int:
    """Show MCP tool definitions"""
    print("=" * 80)
    print("MCP TOOL DEFINITIONS")
    print("=" * 80)
    print()

    for tool in get_mcp_tools():
        print(f"Tool: {tool.name}")
        print(f"MCP name: mcp__multitrace__{tool.name}")
        print()
        print("Description:")
        print(tool.description)
        print()
        print("Input Schema:")
        print(json.dumps(tool.inputSchema, indent=2))
        print()

    return EXIT_OK


def write_output(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(text)
    logger.info(f"wrote {out}")


def tool_arguments(args: argparse.Namespace) -> dict[str, Any]:
    """Read input files and collect the tool arguments for a subcommand"""
    arguments: dict[str, Any] = {
        "system": Path(args.system).read_text(),
        "seed": args.seed,
        "tol": args.tol,
        "threads": args.threads,
    }
    if args.command == "witness":
        arguments["dims"] = args.dims
        arguments["collection"] = args.collection
    elif args.command == "decompose":
        arguments["dims"] = args.dims
        arguments["budget"] = args.budget
    elif args.command == "mtrace":
        arguments["witness_collection"] = Path(args.collection).read_text()
    elif args.command == "multidegree":
        arguments["m"] = args.m
    return arguments


def run_command(args: argparse.Namespace) -> int:
    """Run one workflow subcommand and map the outcome to an exit code"""
    try:
        arguments = tool_arguments(args)
        outcome = dispatch(args.command, arguments)
    except OSError as e:
        logger.error(f"cannot read input: {e}")
        return EXIT_INPUT
    except InputError as e:
        logger.error(f"{type(e).__name__}: {e}")
        return EXIT_INPUT
    except NumericalError as e:
        logger.error(f"{type(e).__name__}: {e}")
        report = {"error": str(e), "kind": type(e).__name__}
        write_output(format_json(report), args.out)
        return EXIT_NUMERICAL
    except (MultitraceError, ValueError) as e:
        logger.error(f"{type(e).__name__}: {e}")
        return EXIT_INPUT

    write_output(format_json(outcome.payload), args.out)
    logger.info(format_summary(args.command, outcome.payload))
    return EXIT_OK if outcome.ok else EXIT_NUMERICAL


def shared_flags() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=DEFAULT_SEED, help="Random seed (default 42)")
    common.add_argument(
        "--tol", type=float, default=TRACE_TOL, help="Trace test tolerance (default 1e-6)"
    )
    common.add_argument(
        "--threads", type=int, default=1, help="Path tracking threads, 0 = one per CPU"
    )
    common.add_argument("--out", type=Path, default=None, help="Output file (default stdout)")
    common.add_argument("-v", "--verbose", action="store_true", help="DEBUG logging on stderr")
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="multitrace",
        description="Witness sets, monodromy and trace tests for polynomial systems",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  %(prog)s witness fixtures/folium.sys
  %(prog)s witness fixtures/curve12.sys --collection 1 --out w.json
  %(prog)s mtrace fixtures/curve12.sys w.json
  %(prog)s decompose fixtures/ellipse_folium.sys --budget 30
  %(prog)s multidegree fixtures/cremona2.sys
        """,
    )
    common = shared_flags()
    subparsers = parser.add_subparsers(dest="command", help="Command to run")

    subparsers.add_parser("list-tools", help="Show MCP tool definitions")

    witness_parser = subparsers.add_parser(
        "witness", parents=[common], help="Witness set or witness collection"
    )
    witness_parser.add_argument("system", help="System file")
    target = witness_parser.add_mutually_exclusive_group()
    target.add_argument("--dims", type=int, nargs="+", help="Slice forms per group (m1 [m2])")
    target.add_argument("--collection", type=int, metavar="M", help="Whole witness collection")

    decompose_parser = subparsers.add_parser(
        "decompose", parents=[common], help="Monodromy partition + trace test per block"
    )
    decompose_parser.add_argument("system", help="System file")
    decompose_parser.add_argument("--dims", type=int, nargs="+", help="Slice forms per group")
    decompose_parser.add_argument(
        "--budget", type=int, default=MONODROMY_BUDGET, help="Maximum monodromy loops"
    )

    mtrace_parser = subparsers.add_parser(
        "mtrace", parents=[common], help="Multihomogeneous trace test"
    )
    mtrace_parser.add_argument("system", help="System file")
    mtrace_parser.add_argument(
        "collection", help="Witness collection JSON (from witness --collection)"
    )

    multidegree_parser = subparsers.add_parser(
        "multidegree", parents=[common], help="Multidegree, Segre degree, log-concavity"
    )
    multidegree_parser.add_argument("system", help="System file")
    multidegree_parser.add_argument("--m", type=int, default=None, help="Variety dimension")

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse exits 2 on usage errors; those are input errors here
        return EXIT_INPUT if e.code else EXIT_OK

    if not args.command:
        parser.print_usage(sys.stderr)
        return EXIT_INPUT

    if args.command == "list-tools":
        return list_tools_command()

    setup_async_logging(level=level_for(args.verbose))
    try:
        return run_command(args)
    finally:
        shutdown_async_logging()


if __name__ == "__main__":
    sys.exit(main())

"""
Tool handlers - single source of truth for tool execution logic.

Both server.py (stdio) and cli.py route through here.

Architecture:
- Protocol layer (server.py) and cli.py handle transport and exit codes
- This module parses arguments and routes to workflows.py
- workflows.py calls the multitrace library; formatters render JSON
"""

import json
from typing import Any

from mcp_multitrace.formatters import format_json
from mcp_multitrace.workflows import (
    Outcome,
    RunConfig,
    run_decompose,
    run_mtrace,
    run_multidegree,
    run_witness,
)
from multitrace.calculations.parser import parse_system
from multitrace.calculations.polynomial import PolySystem
from multitrace.common.constants import DEFAULT_SEED, MONODROMY_BUDGET, TRACE_TOL
from multitrace.common.errors import InputError, SchemaError


def _int(arguments: dict[str, Any], key: str, default: int | None = None) -> int | None:
    value = arguments.get(key, default)
    if value is None:
        return None
    if isinstance(value, bool) or not isinstance(value, int):
        msg = f"'{key}' must be an integer"
        raise InputError(msg)
    return value


def normalize_dims(dims: Any) -> list[int] | None:  # noqa: ANN401
    """
    Handles:
    - None -> None (default dims)
    - 1 -> [1]
    - "1,0" or "1 0" -> [1, 0]
    - [1, 0] -> [1, 0]
    """
    if dims is None:
        return None
    if isinstance(dims, bool):
        msg = "'dims' must be integers"
        raise InputError(msg)
    if isinstance(dims, int):
        return [dims]
    if isinstance(dims, str):
        parts = dims.replace(",", " ").split()
        try:
            return [int(p) for p in parts]
        except ValueError as e:
            msg = f"'dims' must be integers, got {dims!r}"
            raise InputError(msg) from e
    if isinstance(dims, list) and all(isinstance(d, int) and not isinstance(d, bool) for d in dims):
        return list(dims)
    msg = f"'dims' must be an integer list, got {dims!r}"
    raise InputError(msg)


def system_from(arguments: dict[str, Any], tool: str) -> PolySystem:
    text = arguments.get("system")
    if not isinstance(text, str) or not text.strip():
        msg = f"{tool}() requires 'system' parameter (system source text)"
        raise InputError(msg)
    return parse_system(text)


def run_config_from(arguments: dict[str, Any]) -> RunConfig:
    tol = arguments.get("tol", TRACE_TOL)
    if isinstance(tol, bool) or not isinstance(tol, (int, float)):
        msg = "'tol' must be a number"
        raise InputError(msg)
    return RunConfig(
        seed=_int(arguments, "seed", DEFAULT_SEED) or 0,
        tol=float(tol),
        threads=_int(arguments, "threads", 1) or 0,
    )


def handle_witness(arguments: dict[str, Any]) -> Outcome:
    system = system_from(arguments, "witness")
    return run_witness(
        system,
        run_config_from(arguments),
        dims=normalize_dims(arguments.get("dims")),
        collection=_int(arguments, "collection"),
    )


def handle_decompose(arguments: dict[str, Any]) -> Outcome:
    system = system_from(arguments, "decompose")
    return run_decompose(
        system,
        run_config_from(arguments),
        dims=normalize_dims(arguments.get("dims")),
        budget=_int(arguments, "budget", MONODROMY_BUDGET) or 0,
    )


def handle_mtrace(arguments: dict[str, Any]) -> Outcome:
    system = system_from(arguments, "mtrace")
    data = arguments.get("witness_collection")
    if data is None:
        msg = "mtrace() requires 'witness_collection' parameter"
        raise InputError(msg)
    if isinstance(data, str):
        try:
            data = json.loads(data)
        except json.JSONDecodeError as e:
            msg = f"witness collection is not valid JSON: {e}"
            raise SchemaError(msg) from e
    return run_mtrace(system, data, run_config_from(arguments))


def handle_multidegree(arguments: dict[str, Any]) -> Outcome:
    system = system_from(arguments, "multidegree")
    return run_multidegree(system, run_config_from(arguments), m=_int(arguments, "m"))


def dispatch(name: str, arguments: dict[str, Any]) -> Outcome:
    """
    Route tool call to appropriate handler.

    Raises InputError for unknown tools or bad parameters.
    """
    if name == "witness":
        return handle_witness(arguments)

    if name == "decompose":
        return handle_decompose(arguments)

    if name == "mtrace":
        return handle_mtrace(arguments)

    if name == "multidegree":
        return handle_multidegree(arguments)

    msg = f"Unknown tool: {name}"
    raise InputError(msg)


def call_tool(name: str, arguments: dict[str, Any]) -> str:
    """Route a tool call and render its payload as JSON text"""
    return format_json(dispatch(name, arguments).payload)

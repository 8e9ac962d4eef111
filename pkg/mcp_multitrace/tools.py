#!/usr/bin/env python3
"""
MCP Tool Definitions - Single Source of Truth

Tool definitions shared by server.py (stdio) and the list-tools command.
"""

from typing import Any

from mcp.types import Tool

SYSTEM_PROPERTY = {
    "type": "string",
    "description": (
        "System source text, e.g. 'variable_group x, y; f = x^3 + y^3 - 3*x*y;'. "
        "Use hom_variable_group / affine_variable_group to force a group kind; "
        "'dimension N;' declares the dimension of the variety."
    ),
}

RUN_PROPERTIES: dict[str, Any] = {
    "seed": {"type": "integer", "description": "Random seed (default 42)", "default": 42},
    "tol": {
        "type": "number",
        "description": "Trace test tolerance (default 1e-6)",
        "default": 1e-6,
    },
    "threads": {
        "type": "integer",
        "description": "Path tracking threads, 0 = one per CPU (default 1)",
        "default": 1,
    },
}

DIMS_PROPERTY = {
    "oneOf": [
        {"type": "integer"},
        {"type": "array", "items": {"type": "integer"}},
    ],
    "description": (
        "Slice forms per variable group (e.g. 1 or [1, 0]); "
        "defaults to the variety dimension for one group"
    ),
}


def _schema(properties: dict[str, Any], required: list[str]) -> dict[str, Any]:
    return {
        "type": "object",
        "properties": {"system": SYSTEM_PROPERTY, **properties, **RUN_PROPERTIES},
        "required": ["system", *required],
    }


def get_mcp_tools() -> list[Tool]:
    """
    Return list of MCP tools.

    Single source of truth for tool definitions.
    """
    return [
        Tool(
            name="witness",
            description="""Witness set: the variety cut by a random linear slice.

witness(system, dims=1) → points, slice forms, chart, square-up matrix
witness(system, collection=m) → witness collection W_{m1,m-m1} for P^a x P^b (input for mtrace)
""",
            inputSchema=_schema(
                {
                    "dims": DIMS_PROPERTY,
                    "collection": {
                        "type": "integer",
                        "description": "Variety dimension m: compute the whole witness collection",
                    },
                },
                [],
            ),
        ),
        Tool(
            name="decompose",
            description="""Numerical irreducible decomposition by monodromy + trace test.

decompose(system) → blocks of witness points (one per component), trace residual per block
Single variable group only; use mtrace for biprojective varieties.
""",
            inputSchema=_schema(
                {
                    "dims": DIMS_PROPERTY,
                    "budget": {
                        "type": "integer",
                        "description": "Maximum monodromy loops (default 30)",
                        "default": 30,
                    },
                },
                [],
            ),
        ),
        Tool(
            name="mtrace",
            description="""Multihomogeneous trace test: is a witness collection complete?

mtrace(system, witness_collection) → complete, per-pair merged counts and trace residuals
""",
            inputSchema=_schema(
                {
                    "witness_collection": {
                        "oneOf": [{"type": "object"}, {"type": "string"}],
                        "description": (
                            "Witness collection JSON as produced by witness(collection=m)"
                        ),
                    },
                },
                ["witness_collection"],
            ),
        ),
        Tool(
            name="multidegree",
            description="""Multidegree of a variety in P^a x P^b from witness collection counts.

multidegree(system) → [d_{0,m}, ..., d_{m,0}], Segre degree, log-concavity
""",
            inputSchema=_schema(
                {
                    "m": {
                        "type": "integer",
                        "description": "Variety dimension (default: from the system)",
                    },
                },
                [],
            ),
        ),
    ]

#!/usr/bin/env python3
"""
multitrace MCP Server - stdio transport

MCP protocol wrapper over handlers.py. Tool errors come back as text
so one bad system does not end the session.

Run with: poetry run mcp-multitrace
"""

import asyncio
from typing import Any

from mcp.server import Server
from mcp.server.stdio import stdio_server
from mcp.types import TextContent, Tool

from multitrace.common.errors import MultitraceError

from .handlers import call_tool as handle_tool
from .logging_config import get_logger, setup_async_logging, shutdown_async_logging
from .tools import get_mcp_tools

logger = get_logger(__name__)

app = Server("multitrace")


@app.list_tools()  # type: ignore[misc,no-untyped-call]
async def list_tools() -> list[Tool]:
    """List available MCP tools - imported from tools.py (single source of truth)"""
    return get_mcp_tools()


@app.call_tool()  # type: ignore[misc]
async def call_tool(name: str, arguments: Any) -> list[TextContent]:  # noqa: ANN401
    """Handle tool execution - delegates to handlers.py off the event loop"""
    try:
        result = await asyncio.to_thread(handle_tool, name, arguments or {})
    except MultitraceError as e:
        logger.warning(f"{name} failed: {e}")
        result = f"Error ({type(e).__name__}): {e}"
    return [TextContent(type="text", text=result)]


async def serve() -> None:
    async with stdio_server() as (read_stream, write_stream):
        await app.run(read_stream, write_stream, app.create_initialization_options())


def main() -> None:
    """Run the MCP server"""
    setup_async_logging()
    try:
        asyncio.run(serve())
    finally:
        shutdown_async_logging()


if __name__ == "__main__":
    main()

#!/usr/bin/env python3
"""GapLab MCP Server.

This module exposes the GapLab checks over MCP on stdio, so an assistant
can compile gap witnesses, count deck preimages and run stage searches
without the command line.

Tools available:
    - gaplab_collapse: Compile and verify a multi-target gap witness
    - gaplab_pcount: Count the graphs with a given deck
    - gaplab_sweep: pcount of every deck up to n vertices
    - gaplab_encode: Verify the polynomial encoding of oracle machines
    - gaplab_stage: Run the stage searches at one length

Usage:
    # As a command-line tool (after pip install)
    gaplab-mcp

    # Or run directly
    python -m gaplab.server

Environment Variables:
    GAPLAB_LOG_LEVEL: Logging level (default: INFO)
    GAPLAB_ALPHABET: Input alphabet (default: 01)
    GAPLAB_GRAPH_BOUND: Largest vertex count (default: 8)
    GAPLAB_MAX_CANDIDATES: Stage search budget (default: 100000)
"""

import asyncio
import logging
import sys
from typing import Any

from mcp.server import Server
from mcp.server.stdio import stdio_server
from mcp.types import Tool

from .cli import configure_logging
from .config import Settings, get_settings
from .tools import ToolHandler, get_tool_definitions

# Module-level logger
logger = logging.getLogger("gaplab")


def create_server(settings: Settings) -> tuple[Server, ToolHandler]:
    """Create and configure the MCP server.

    Args:
        settings: Server configuration settings.

    Returns:
        Tuple of (server, tool_handler).
    """
    server = Server("gaplab")
    tool_handler = ToolHandler(settings)

    @server.list_tools()
    async def list_tools() -> list[Tool]:
        """Return available MCP tools."""
        return get_tool_definitions()

    @server.call_tool()
    async def call_tool(name: str, arguments: dict[str, Any]) -> list[Any]:
        """Handle tool calls from MCP client."""
        return await tool_handler.handle(name, arguments)

    return server, tool_handler


async def run_server() -> None:
    """Run the MCP server with stdio transport."""
    settings = get_settings()
    configure_logging(settings.log_level)

    logger.info(
        f"Starting GapLab MCP server (alphabet {settings.alphabet!r}, "
        f"graphs up to {settings.graph_bound} vertices, universes up to {settings.universe_bound})"
    )

    server, _ = create_server(settings)

    async with stdio_server() as (read_stream, write_stream):
        await server.run(
            read_stream,
            write_stream,
            server.create_initialization_options(),
        )


def main() -> None:
    """Main entry point for the gaplab-mcp command."""
    try:
        asyncio.run(run_server())
    except KeyboardInterrupt:
        logger.info("Server stopped by user")
    except Exception as e:
        logger.exception(f"Server error: {e}")
        sys.exit(1)


if __name__ == "__main__":
    main()

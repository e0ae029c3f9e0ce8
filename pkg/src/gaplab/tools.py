"""MCP tool definitions and handlers for GapLab.

This module defines the MCP tools exposed by the GapLab server and
contains the logic for handling tool calls. Every tool runs the same
library calls as the command line and answers with the same Markdown.
"""

import logging
from dataclasses import dataclass
from typing import Any

from mcp.types import TextContent, Tool

from .config import Settings
from .diagonalize import StageKind, claim_report, joint_time_bound, run_stage, stage_context
from .dsl import load_document
from .errors import GapLabError, ParseError
from .fixtures import STAGE_FIXTURES, constant_function, stage_fixture
from .formatters import (
    format_claim_report,
    format_collapse_check,
    format_encoding_report,
    format_pcount,
    format_reconstruction_report,
    format_stage_report,
)
from .membership import verify_ceqp, verify_collapse
from .natpoly import NatPoly
from .polyenc import OracleMachine, verify_encoding
from .reconstruct import Deck, Proceed, pcount, q_reconstruction_report, restricted_legitimate
from .strings import Domain
from .targets import TargetSpec

logger = logging.getLogger("gaplab")


# Tool name constants
TOOL_COLLAPSE = "gaplab_collapse"
TOOL_PCOUNT = "gaplab_pcount"
TOOL_SWEEP = "gaplab_sweep"
TOOL_ENCODE = "gaplab_encode"
TOOL_STAGE = "gaplab_stage"

# Tool calls stay interactive, so their domains are smaller than the CLI's.
MAX_TOOL_LENGTH = 6


@dataclass
class ToolError:
    """Represents an error that occurred during tool execution."""

    message: str

    def to_content(self) -> list[TextContent]:
        """Convert error to MCP TextContent."""
        return [TextContent(type="text", text=f"Error: {self.message}")]


def get_tool_definitions() -> list[Tool]:
    """Return the list of available MCP tools.

    Returns:
        List of Tool definitions for MCP.
    """
    return [
        Tool(
            name=TOOL_COLLAPSE,
            description=(
                "Compile a gap witness with several admissible targets into a single-target "
                "witness and check both exhaustively on all inputs up to a length. "
                "The document holds machines, a program and a spec in GapLab's s-expression "
                "or JSON form."
            ),
            inputSchema={
                "type": "object",
                "properties": {
                    "document": {
                        "type": "string",
                        "description": "Document text with (machine ...), a program and a (spec ...) or (two-sided ...)",
                        "minLength": 1,
                    },
                    "max_length": {
                        "type": "integer",
                        "description": "Largest input length checked (default: 4)",
                        "minimum": 0,
                        "maximum": MAX_TOOL_LENGTH,
                        "default": 4,
                    },
                    "ceqp": {
                        "type": "boolean",
                        "description": "Read the first machine and spec as an r-C=P witness. Default: false",
                    },
                },
                "required": ["document"],
            },
        ),
        Tool(
            name=TOOL_PCOUNT,
            description=(
                "Count the nonisomorphic graphs whose deck of vertex-deleted subgraphs is the "
                "given multiset of cards. A count of 0 means the deck is not legitimate."
            ),
            inputSchema={
                "type": "object",
                "properties": {
                    "deck": {
                        "type": "array",
                        "items": {"type": "string"},
                        "description": "Cards as graph6 strings, all on the same number of vertices",
                        "minItems": 1,
                    },
                    "class_k": {
                        "type": "integer",
                        "description": "Optional: restrict to graphs of minimum degree at most k",
                        "minimum": 0,
                    },
                },
                "required": ["deck"],
            },
        ),
        Tool(
            name=TOOL_SWEEP,
            description=(
                "Compute pcount(deck(G)) for every graph G on n_min..n_max vertices and "
                "report the maximum, a histogram and any count above q(n)."
            ),
            inputSchema={
                "type": "object",
                "properties": {
                    "n_max": {
                        "type": "integer",
                        "description": "Largest vertex count (default: 6, max: 8)",
                        "minimum": 1,
                        "maximum": 8,
                        "default": 6,
                    },
                    "n_min": {
                        "type": "integer",
                        "description": "Smallest vertex count (default: 3)",
                        "minimum": 1,
                        "default": 3,
                    },
                    "q_poly": {
                        "type": "string",
                        "description": "Bound q(n) such as '1' or 'n + 1' (default: '1')",
                        "default": "1",
                    },
                },
                "required": [],
            },
        ),
        Tool(
            name=TOOL_ENCODE,
            description=(
                "Encode each oracle machine of a document as a multilinear polynomial and "
                "compare it with the simulated gap under every oracle over its universe."
            ),
            inputSchema={
                "type": "object",
                "properties": {
                    "document": {
                        "type": "string",
                        "description": "Document text with one or more (oracle-machine ...) forms",
                        "minLength": 1,
                    },
                    "input": {
                        "type": "string",
                        "description": "Input string x (default: empty)",
                        "default": "",
                    },
                },
                "required": ["document"],
            },
        ),
        Tool(
            name=TOOL_STAGE,
            description=(
                "Run the gap and accepting-path stage searches of the oracle constructions at one "
                "length, for a built-in fixture machine or one given in a document."
            ),
            inputSchema={
                "type": "object",
                "properties": {
                    "fixture": {
                        "type": "string",
                        "enum": list(STAGE_FIXTURES),
                        "description": "Built-in machine N (ignored when a document is given)",
                    },
                    "document": {
                        "type": "string",
                        "description": "Optional: document with an (oracle-machine ...) and a (function-machine ...)",
                    },
                    "n": {
                        "type": "integer",
                        "description": "Stage length (default: 3)",
                        "minimum": 0,
                        "maximum": 4,
                        "default": 3,
                    },
                    "val": {
                        "type": "integer",
                        "description": "Value of the constant machine M when the document has none (default: 1)",
                        "default": 1,
                    },
                    "claim": {
                        "type": "boolean",
                        "description": "Also analyze the accepting path sets. Default: false",
                    },
                },
                "required": [],
            },
        ),
    ]


class ToolHandler:
    """Handles execution of MCP tool calls.

    This class encapsulates the logic for processing tool calls,
    including input validation and error handling.
    """

    def __init__(self, settings: Settings) -> None:
        """Initialize the tool handler.

        Args:
            settings: Server settings.
        """
        self.settings = settings

    async def handle(self, name: str, arguments: dict[str, Any]) -> list[TextContent]:
        """Handle a tool call.

        Args:
            name: Name of the tool to execute.
            arguments: Tool arguments from MCP client.

        Returns:
            List of TextContent with the tool result.
        """
        logger.info(f"Tool called: {name} with args: {sorted(arguments)}")

        try:
            if name == TOOL_COLLAPSE:
                return await self._handle_collapse(arguments)
            elif name == TOOL_PCOUNT:
                return await self._handle_pcount(arguments)
            elif name == TOOL_SWEEP:
                return await self._handle_sweep(arguments)
            elif name == TOOL_ENCODE:
                return await self._handle_encode(arguments)
            elif name == TOOL_STAGE:
                return await self._handle_stage(arguments)
            else:
                return ToolError(f"Unknown tool: {name}").to_content()

        except GapLabError as e:
            logger.error(f"{type(e).__name__} in {name}: {e}")
            return ToolError(str(e)).to_content()

        except (TypeError, ValueError) as e:
            logger.error(f"Bad arguments for {name}: {e}")
            return ToolError(f"Invalid arguments: {e}").to_content()

        except Exception:
            logger.exception(f"Unexpected error calling tool {name}")
            # Don't expose internal error details to client
            return ToolError("An unexpected error occurred").to_content()

    def _document(self, arguments: dict[str, Any]) -> str:
        text = str(arguments.get("document", "")).strip()
        if not text:
            raise ParseError("'document' parameter is required")
        return text

    async def _handle_collapse(self, arguments: dict[str, Any]) -> list[TextContent]:
        """Handle collapse tool call."""
        document = load_document(self._document(arguments), self.settings.alphabet)
        max_length = min(int(arguments.get("max_length", 4)), MAX_TOOL_LENGTH, self.settings.max_length)
        domain = Domain(self.settings.alphabet, max_length)
        specs = document.specs()
        if not specs:
            return ToolError("document contains no spec").to_content()

        if arguments.get("ceqp", False):
            if not document.machines or not isinstance(specs[0], TargetSpec):
                return ToolError("a C=P check needs a machine and a plain spec").to_content()
            check = verify_ceqp(next(iter(document.machines.values())), specs[0], domain, "document")
        else:
            programs = document.programs()
            if not programs:
                return ToolError("document contains no program").to_content()
            check = verify_collapse(programs[0], specs[0], domain, "document")

        return [TextContent(type="text", text=format_collapse_check(check))]

    async def _handle_pcount(self, arguments: dict[str, Any]) -> list[TextContent]:
        """Handle pcount tool call."""
        cards = arguments.get("deck") or []
        if not isinstance(cards, list) or not cards:
            return ToolError("'deck' must be a nonempty list of graph6 strings").to_content()

        d = Deck.from_graph6(str(card) for card in cards)
        count = pcount(d, self.settings.graph_bound)
        restricted = None
        if arguments.get("class_k") is not None:
            verdict = restricted_legitimate(d, int(arguments["class_k"]), self.settings.graph_bound)
            restricted = (
                f"proceed, pcount {verdict.count}"
                if isinstance(verdict, Proceed)
                else f"reject with gap 0 (card `{verdict.card}`)"
            )

        return [TextContent(type="text", text=format_pcount(d.serialization(), count, restricted))]

    async def _handle_sweep(self, arguments: dict[str, Any]) -> list[TextContent]:
        """Handle sweep tool call."""
        n_max = int(arguments.get("n_max", 6))
        n_min = int(arguments.get("n_min", 3))
        q = NatPoly.parse(str(arguments.get("q_poly", "1")))

        report = q_reconstruction_report(n_max, q, n_min, self.settings.graph_bound)

        return [TextContent(type="text", text=format_reconstruction_report(report))]

    async def _handle_encode(self, arguments: dict[str, Any]) -> list[TextContent]:
        """Handle encode tool call."""
        machines = load_document(self._document(arguments), self.settings.alphabet).oracle_machines
        if not machines:
            return ToolError("document contains no oracle-machine").to_content()
        x = str(arguments.get("input", ""))

        reports = [verify_encoding(machine, x, self.settings.universe_bound) for machine in machines.values()]

        return [TextContent(type="text", text="\n\n".join(format_encoding_report(r) for r in reports))]

    async def _handle_stage(self, arguments: dict[str, Any]) -> list[TextContent]:
        """Handle stage tool call."""
        n = int(arguments.get("n", 3))
        if not 0 <= n <= 4:
            return ToolError("'n' must be between 0 and 4").to_content()
        val = int(arguments.get("val", 1))
        function = constant_function(val)

        machine: OracleMachine
        if arguments.get("document"):
            document = load_document(self._document(arguments), self.settings.alphabet)
            if not document.oracle_machines:
                return ToolError("document contains no oracle-machine").to_content()
            machine = next(iter(document.oracle_machines.values()))
            if document.function_machines:
                function = next(iter(document.function_machines.values()))
        else:
            fixture = arguments.get("fixture", "acc-counter")
            if fixture not in STAGE_FIXTURES:
                return ToolError(f"Unknown fixture: {fixture}").to_content()
            machine = stage_fixture(fixture, n, val, self.settings.alphabet)

        p = joint_time_bound(machine, function, n)
        ctx = stage_context(machine, function, n, p=p, alphabet=self.settings.alphabet)
        kinds: list[StageKind] = ["gap", "acc"]
        parts = [format_stage_report(run_stage(ctx, kind, self.settings.max_candidates)) for kind in kinds]
        if arguments.get("claim", False):
            parts.append(format_claim_report(claim_report(ctx)))

        return [TextContent(type="text", text="\n\n".join(parts))]


"""Pytest configuration and fixtures for GapLab tests."""

import random

import pytest

from gaplab.config import Settings
from gaplab.fixtures import make_rng
from gaplab.natpoly import NatPoly
from gaplab.programs import Base, BaseMachine
from gaplab.strings import Domain
from gaplab.tools import ToolHandler
from gaplab.trees import ACCEPT, BALANCED, REJECT, Choice, const_tree


@pytest.fixture
def settings() -> Settings:
    """Create test settings."""
    return Settings(
        log_level="DEBUG",
        max_length=4,
        graph_bound=8,
        universe_bound=12,
        max_candidates=10_000,
    )


@pytest.fixture
def domain() -> Domain:
    """Binary strings up to length 3."""
    return Domain("01", 3)


@pytest.fixture
def rng() -> random.Random:
    """Seeded generator shared by the randomized checks."""
    return make_rng(20240601)


@pytest.fixture
def tool_handler(settings: Settings) -> ToolHandler:
    """Create a test tool handler."""
    return ToolHandler(settings)


@pytest.fixture
def two_one_machine() -> BaseMachine:
    """Machine with two accepting paths and one rejecting path on every input."""
    return BaseMachine("two-one", NatPoly.constant(2), default=Choice(BALANCED, ACCEPT))


@pytest.fixture
def base3() -> Base:
    """Base program with gap 3 everywhere."""
    return Base(BaseMachine("three", NatPoly.constant(2), default=const_tree(3)))


@pytest.fixture
def base_minus2() -> Base:
    """Base program with gap -2 everywhere."""
    return Base(BaseMachine("minus-two", NatPoly.constant(1), default=Choice(REJECT, REJECT)))


# Sample documents


@pytest.fixture
def collapse_document() -> str:
    """A two-target LWPP witness: g is 3 on "01", 5 on "10" and 0 elsewhere."""
    return """
    ; accepted inputs hit one of the targets 3 and 5
    (machine m (time "4")
      (default (gap 0))
      (on "01" (gap 3))
      (on "10" (gap 5 1)))
    (base m)
    (spec length (targets () (default 3 5)) "2")
    """


@pytest.fixture
def oracle_document() -> str:
    """Accept iff "0" is in the oracle, plus a two-query machine."""
    return """
    (oracle-machine member (time "1") (universe "0")
      (default (query "0" accept reject)))
    (oracle-machine both (time "3") (universe "0" "1")
      (default (choice (query "0" accept reject) (query "1" (query "0" accept reject) reject))))
    """


@pytest.fixture
def stage_document() -> str:
    """An accepting-path counter at n = 1 and a function machine with value 1."""
    return """
    (oracle-machine counter (time "2") (universe "0" "1")
      (default (choice (query "0" accept reject) (query "1" accept reject))))
    (function-machine m (time "1") (default 1))
    """

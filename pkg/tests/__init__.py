"""
GRASP Unit Tests
"""

import asyncio
import logging
from pathlib import Path
from typing import Final

logging.basicConfig(
    format="%(asctime)s %(levelname)-8s %(filename)s:%(lineno)d %(message)s",
    level=logging.DEBUG,
)

FIXTURES: Final = Path(__file__).parent / "fixtures"
TOOLS: Final = FIXTURES / "tools"
HYPOTHETICAL: Final = FIXTURES / "hypothetical"


def async_test(coro):
    """
    Creates an event loop wrapper around an async test case
    """

    def wrapper(*args, **kwargs):
        return asyncio.run(coro(*args, **kwargs))

    return wrapper


def fixture_bytes(slug: str) -> bytes:
    """
    Raw bytes of a tool record fixture.
    """
    return (TOOLS / f"{slug}.json").read_bytes()

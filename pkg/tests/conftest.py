"""Shared fixtures: put src/ on the path the way run_dev.py does."""

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from limits import get_limits, set_limits  # noqa: E402


@pytest.fixture(autouse=True)
def restore_limits():
    """Tests that tighten the caps must not leak them into other tests."""
    saved = get_limits()
    yield
    set_limits(saved)

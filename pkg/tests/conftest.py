from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from paramflow import Registry

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def registry() -> Registry:
    return Registry()


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES

import random
from pathlib import Path

import pytest

FIXTURES = Path(__file__).resolve().parent.parent / "src" / "oraclelab" / "fixtures"
GOLDEN = Path(__file__).resolve().parent / "golden"


@pytest.fixture
def rng():
    return random.Random(1234)


def fixture_path(*parts) -> Path:
    return FIXTURES.joinpath(*parts)

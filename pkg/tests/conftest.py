from pathlib import Path

import pytest

from pm3d import parser
from pm3d.mapping import parse_config

FIXTURES = Path(__file__).parent / "fixtures"
GOLDEN = Path(__file__).parent / "golden"


def fixture_text(name: str) -> str:
    return (FIXTURES / name).read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def blood_model():
    model, _ = parser.parse(fixture_text("blood_analysis.xml"))
    return model


@pytest.fixture(scope="session")
def order_model():
    model, _ = parser.parse(fixture_text("order_process.xml"))
    return model


@pytest.fixture(scope="session")
def full_config():
    return parse_config(fixture_text("full_mapping.cfg"))

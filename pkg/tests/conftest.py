from pathlib import Path

import pytest

from accord.core.model import Baseline, Category, CategoryKind
from accord.ingest.files import parse_baseline

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture(scope="session")
def federal_baseline() -> Baseline:
    return parse_baseline((FIXTURES / "federal_baseline.csv").read_text())


@pytest.fixture(scope="session")
def worked_baseline() -> Baseline:
    return parse_baseline((FIXTURES / "worked_baseline.csv").read_text())


@pytest.fixture
def tiny_baseline() -> Baseline:
    return Baseline(
        id="tiny",
        name="tiny",
        categories=(
            Category(id="Defense", name="Defense", kind=CategoryKind.EXPENSE),
            Category(id="IncomeTax", name="IncomeTax", kind=CategoryKind.REVENUE),
        ),
        amounts={"Defense": -700, "IncomeTax": 1200},
    )


@pytest.fixture(scope="session")
def fixture_dir() -> Path:
    return FIXTURES

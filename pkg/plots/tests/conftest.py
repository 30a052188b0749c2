from pathlib import Path

import pytest

from towerfigs.records import load_rows

FIXTURE = Path(__file__).parent / "fixtures" / "records.csv"


@pytest.fixture(scope="session")
def fixture_rows():
    return load_rows(FIXTURE)


@pytest.fixture
def fixture_path():
    return FIXTURE

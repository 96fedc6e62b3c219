import sys
from pathlib import Path

import pytest

SCRIPTS_DIR = Path(__file__).resolve().parent.parent
DATA_DIR = Path(__file__).resolve().parent / "data"

sys.path.insert(0, str(SCRIPTS_DIR))


@pytest.fixture
def data_dir() -> Path:
    return DATA_DIR


@pytest.fixture
def scripts_dir() -> Path:
    return SCRIPTS_DIR

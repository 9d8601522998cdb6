"""
Shared fixtures: the bundled group tables and solved quotient data.
"""

import copy
import json
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from zc_help.constraints import ConstraintOptions
from zc_help.groups import load_group
from zc_help.solver import QuotientSolutions, verify_zc1

DATA_DIR = Path(__file__).parent.parent / "src" / "zc_help" / "data"


def read_group_document(stem: str) -> dict:
    """The raw JSON document of a bundled group, for mutation tests."""
    return json.loads((DATA_DIR / f"{stem}.json").read_text(encoding="utf-8"))


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return DATA_DIR


@pytest.fixture(scope="session")
def s5():
    return load_group((DATA_DIR / "s5.json").read_bytes())


@pytest.fixture(scope="session")
def two_s5():
    return load_group((DATA_DIR / "2s5.json").read_bytes())


@pytest.fixture(scope="session")
def gl25():
    return load_group((DATA_DIR / "gl25.json").read_bytes())


@pytest.fixture(scope="session")
def s5_result(s5):
    """S5 verified with every constraint family enabled."""
    return verify_zc1(s5, ConstraintOptions())


@pytest.fixture(scope="session")
def s5_quotient(s5, s5_result):
    """S5 as the solved quotient of 2.S5 and GL(2,5)."""
    return {"S5": QuotientSolutions(s5, s5_result)}


@pytest.fixture
def s5_document():
    return copy.deepcopy(read_group_document("s5"))


@pytest.fixture
def two_s5_document():
    return copy.deepcopy(read_group_document("2s5"))

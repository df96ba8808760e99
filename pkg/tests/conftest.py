import json
from pathlib import Path
from random import Random

import pytest

from core import config
from orbits.pi1.models import load_decomposition

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

FIGURE_FIXTURES = (
    "case_a_b3",
    "case_b1",
    "case_b4_e3",
    "case_b2_e1",
    "case_b2_d1_e2",
    "case_b6_d1_e2",
)


def fixture_path(name: str) -> Path:
    return FIXTURES / f"{name}.json"


@pytest.fixture
def load_fixture():
    def _load(name: str):
        return load_decomposition(fixture_path(name))
    return _load


@pytest.fixture
def fixture_json():
    def _read(name: str) -> dict:
        return json.loads(fixture_path(name).read_text())
    return _read


@pytest.fixture
def rng() -> Random:
    return Random(config.SEED)

from pathlib import Path

import pytest

from app.services.poly_model import load_polygon
from app.services.projection_diagram import parse_pd

DATA_DIR = Path(__file__).resolve().parent.parent / "data"

TREFOIL_PD = "X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]"
FIGURE_EIGHT_PD = "X[4,2,5,1] X[8,6,1,5] X[6,3,7,4] X[2,7,3,8]"

UNIT_SQUARE = "0 0 0\n1 0 0\n1 1 0\n0 1 0\n"


@pytest.fixture
def data_dir() -> Path:
    return DATA_DIR


@pytest.fixture
def fixture_polygon():
    def load(label: str):
        return load_polygon(DATA_DIR / f"{label}.poly")

    return load


@pytest.fixture
def trefoil():
    return parse_pd(TREFOIL_PD)


@pytest.fixture
def figure_eight():
    return parse_pd(FIGURE_EIGHT_PD)

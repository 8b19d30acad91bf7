from pathlib import Path

import pytest

from gkmcalc.builders import complete_graph, permutahedron
from gkmcalc.graph import polarize
from gkmcalc.thom import ThomCalculator

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def flag3():
    return permutahedron(3)


@pytest.fixture(scope="session")
def flag3_calc(flag3):
    return ThomCalculator(polarize(flag3))


@pytest.fixture(scope="session")
def k5_calc():
    return ThomCalculator(polarize(complete_graph(5)))


@pytest.fixture(scope="session")
def s4_calc():
    return ThomCalculator(polarize(permutahedron(4)))


@pytest.fixture(scope="session")
def data_dir():
    return DATA

import random
import sys
from pathlib import Path

import pytest

from gaussnet.graph import Dag, parse_dag

ROOT = Path(__file__).resolve().parents[1]
DATA = ROOT / "data"
sys.path.insert(0, str(Path(__file__).parent))


def load(name: str) -> Dag:
    return parse_dag((DATA / name).read_text())


@pytest.fixture
def fourcycle() -> Dag:
    return load("fourcycle.dag")


@pytest.fixture
def verma() -> Dag:
    return load("verma.dag")


@pytest.fixture
def a139() -> Dag:
    return load("a139.dag")


@pytest.fixture
def quartet() -> Dag:
    return load("quartet.dag")


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20240611)


def chain(n: int) -> Dag:
    return Dag(n, frozenset((i, i + 1) for i in range(1, n)))


def complete(n: int) -> Dag:
    return Dag(n, frozenset((i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)))

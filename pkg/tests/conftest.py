from pathlib import Path

import pytest

from geostab.lattice import load_surface, validate_surface

SURFACES = Path(__file__).resolve().parents[1] / "surfaces"


def surface(name):
    return validate_surface(load_surface(SURFACES / name))


@pytest.fixture(scope="session")
def p2():
    return surface("p2.json")


@pytest.fixture(scope="session")
def quadric():
    return surface("quadric.toml")


@pytest.fixture(scope="session")
def quadric_poly():
    return surface("quadric_polyhedral.json")


@pytest.fixture(scope="session")
def f1():
    return surface("f1.json")


@pytest.fixture(scope="session")
def surfaces_dir():
    return SURFACES

import pytest

from relsimp.logic.syntax import load_program
from relsimp.sample_programs import sample_programs_path


def _sample(name):
    return load_program(sample_programs_path / name)


@pytest.fixture
def p1():
    return _sample("p1.lp")


@pytest.fixture
def p2():
    return _sample("p2.lp")


@pytest.fixture
def p3():
    return _sample("p3.lp")


@pytest.fixture
def q1():
    return _sample("q1.lp")


@pytest.fixture
def q2():
    return _sample("q2.lp")

import pathlib

import pytest

from afsys.algebra import FRAME, PROFILES
from afsys.dsl import parse_file
from afsys.standard import chain_frame, diamond_frame, two_frame
from afsys.topology import AffineTheory

FIXTURES = pathlib.Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture(scope="session")
def fixture_dir():
    return FIXTURES


@pytest.fixture(scope="session")
def ws_sys1():
    return parse_file(FIXTURES / "sys1.afs")


@pytest.fixture(scope="session")
def ws_diamond():
    return parse_file(FIXTURES / "diamond.afs")


@pytest.fixture(scope="session")
def ws_inst1():
    return parse_file(FIXTURES / "inst1.afs")


@pytest.fixture(scope="session")
def ws_inst2():
    return parse_file(FIXTURES / "inst2.afs")


@pytest.fixture(scope="session")
def ws_afinst1():
    return parse_file(FIXTURES / "afinst1.afs")


@pytest.fixture(scope="session")
def theory2():
    return AffineTheory(two_frame(), FRAME)


@pytest.fixture(scope="session")
def theory3():
    return AffineTheory(chain_frame(3), FRAME)


@pytest.fixture(scope="session")
def theory_diamond():
    return AffineTheory(diamond_frame(), FRAME)

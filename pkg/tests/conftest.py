import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

FIXTURES = os.path.join(os.path.dirname(__file__), "fixtures")


@pytest.fixture(scope="session")
def fixtures_dir():
    return FIXTURES


@pytest.fixture(scope="session")
def pb_mini_path():
    return os.path.join(FIXTURES, "pb_mini.pgn")


@pytest.fixture(scope="session")
def comp_mini_path():
    return os.path.join(FIXTURES, "comp_mini.pgn")


@pytest.fixture(scope="session")
def suite3_path():
    return os.path.join(FIXTURES, "suite3.epd")


@pytest.fixture(scope="session")
def sample_epd_path():
    return os.path.join(FIXTURES, "sample.epd")

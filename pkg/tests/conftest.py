from pathlib import Path

import pytest

import adfbn
from adfbn.textio import load

DATA = Path(adfbn.__file__).parent / "data"


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return DATA


@pytest.fixture
def travel():
    return load(DATA / "travel.adf")


@pytest.fixture
def cycle3():
    return load(DATA / "cycle3.adf")


@pytest.fixture
def self_adf():
    return load(DATA / "self.adf")


@pytest.fixture
def taut():
    return load(DATA / "taut.adf")


@pytest.fixture
def fig2():
    return load(DATA / "fig2.bnet")


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    verdicts = getattr(mod, "VERDICTS", None)
    if verdicts:
        terminalreporter.section("acceptance criteria")
        for n in sorted(verdicts):
            terminalreporter.write_line(verdicts[n])

import random

import pytest
from hypothesis import settings

from icatlab.categories import FinCat
from icatlab.cells import random_sset
from icatlab.icat import InternalCat

settings.register_profile("default", max_examples=25, deadline=None)
settings.load_profile("default")


def rand_sset(seed: int, D: int = 3, max_simplices: int = 6, max_dim: int = 2):
    return random_sset(random.Random(seed), D, max_simplices, max_dim)


def as_icat(cat: FinCat, D: int = 2) -> InternalCat:
    return InternalCat.from_category(cat, D)


@pytest.fixture
def chain1():
    return as_icat(FinCat.chain(1))


@pytest.fixture
def chaotic2():
    return as_icat(FinCat.chaotic([0, 1]))


# --- one line per acceptance criterion -------------------------------------------------------

_criteria: dict = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    if report.when == "call" or report.outcome == "failed":
        name = report.nodeid.split("::")[-1]
        prev = _criteria.get(name, "PASS")
        _criteria[name] = "FAIL" if report.outcome == "failed" or prev == "FAIL" else "PASS"


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for name, verdict in _criteria.items():
        terminalreporter.write_line(f"{verdict}  {name.removeprefix('test_')}")

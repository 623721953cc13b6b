from functools import lru_cache

import pytest

from nilforge.coloring import Coloring
from nilforge.complex import build
from nilforge.presentation import build_presentation


@lru_cache(maxsize=None)
def cx(n):
    return build(n)


@lru_cache(maxsize=None)
def col(n, radius=2):
    return Coloring(cx(n), radius)


@lru_cache(maxsize=None)
def pres(n, radius=2, cat2_edges=4):
    return build_presentation(col(n, radius), cat2_edges, strict=False)


@pytest.fixture(scope="session")
def cached():
    return type("Cached", (), {"cx": staticmethod(cx), "col": staticmethod(col), "pres": staticmethod(pres)})


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)

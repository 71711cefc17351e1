import sys

import pytest

from ptiplace import load_fixture, load_relation
from ptiplace.io import fixture_path


@pytest.fixture(scope="session")
def fig():
    cache = {}

    def get(name):
        if name not in cache:
            cache[name] = load_fixture(name)
        return cache[name]

    return get


@pytest.fixture(scope="session")
def rel(fig):
    def get(net_name, rel_name):
        return load_relation(fixture_path(rel_name + ".rel"), fig(net_name))

    return get


def pytest_terminal_summary(terminalreporter):
    results = getattr(sys.modules.get("test_acceptance"), "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for i in sorted(results):
            terminalreporter.write_line(results[i])

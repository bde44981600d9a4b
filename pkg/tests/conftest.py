import os

import pytest
from hypothesis import HealthCheck, settings

from gindex import build_index

settings.register_profile(
    "default", deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large])
settings.register_profile("thorough", deadline=None, max_examples=400)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

E1 = b"abab"


@pytest.fixture(scope="session")
def e1():
    return build_index(E1)


@pytest.fixture(scope="session")
def e1_trie():
    return build_index(E1, with_trie=True)


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)

import random

import pytest

DEFAULT_SEED = 20261014
ACCEPTANCE_LINES = []


def pytest_addoption(parser):
    parser.addoption("--seed", action="store", type=int, default=DEFAULT_SEED,
                     help="seed for the randomized property suites")


@pytest.fixture
def seed(request):
    return request.config.getoption("--seed")


@pytest.fixture
def rng(seed):
    return random.Random(seed)


@pytest.fixture
def acceptance_line():
    """Record one criterion outcome for the end-of-run summary."""
    def record(number, ok, text):
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {text}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

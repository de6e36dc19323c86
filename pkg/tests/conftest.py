import pytest

from _acclog import LINES
from strippack.generators import gen, random_corpus_specs


def pytest_terminal_summary(terminalreporter):
    if LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def random_corpus():
    """1000 seeded rectangle instances, n in 1..15, integer sizes up to 8."""
    return [gen(s) for s in random_corpus_specs(1000, seed=1)]


@pytest.fixture(scope="session")
def square_corpus():
    return [gen(s) for s in random_corpus_specs(300, seed=2, squares=True)]

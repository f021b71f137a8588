import functools

import pytest

from powgraph.corpus import default_corpus
from powgraph.groups import build_group

ACCEPTANCE_LINES: list[str] = []


@functools.lru_cache(maxsize=None)
def corpus_specs():
    return tuple(default_corpus())


@functools.lru_cache(maxsize=None)
def model(spec_json: str):
    from powgraph.groups import GroupSpec

    return build_group(GroupSpec.from_json(spec_json))


@pytest.fixture(scope="session")
def corpus():
    return corpus_specs()


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

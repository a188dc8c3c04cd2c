import pytest

from edgecascade.graph import Network

ACCEPTANCE_LINES: list[str] = []


def record_criterion(name: str, ok: bool, detail: str = "") -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] {name}"
    if detail:
        line += f" -- {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long-running reproduction checks")


@pytest.fixture
def triangle():
    return Network.from_edges(3, [(0, 1), (0, 2), (1, 2)])


@pytest.fixture
def star():
    # center 0, leaves 1..3
    return Network.from_edges(4, [(0, 1), (0, 2), (0, 3)])


@pytest.fixture
def path3():
    return Network.from_edges(3, [(0, 1), (1, 2)])


@pytest.fixture
def path4():
    return Network.from_edges(4, [(0, 1), (1, 2), (2, 3)])

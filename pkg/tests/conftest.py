import pytest

from finitop.census import enumerate_topologies
from finitop.topology import discrete, indiscrete, sierpinski, validate_topology


@pytest.fixture(scope="session")
def spaces_upto3():
    return [x for n in range(4) for x in enumerate_topologies(n)]


@pytest.fixture(scope="session")
def spaces_upto4():
    return [x for n in range(5) for x in enumerate_topologies(n)]


@pytest.fixture
def sier():
    return sierpinski()


@pytest.fixture
def split3():
    # {0} and {1,2} are complementary clopens
    return validate_topology(3, [[], [0], [1, 2], [0, 1, 2]])


@pytest.fixture
def d2():
    return discrete(2)


@pytest.fixture
def i2():
    return indiscrete(2)


def pytest_terminal_summary(terminalreporter):
    lines = []
    for status in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(status, []):
            props = dict(getattr(rep, "user_properties", []))
            if "criterion" in props and rep.when == "call":
                lines.append((props["criterion"], "PASS" if status == "passed" else "FAIL"))
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for name, verdict in sorted(lines):
        terminalreporter.write_line(f"{verdict}  criterion {name}")

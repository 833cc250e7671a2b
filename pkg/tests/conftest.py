import pytest

from paradigmkit import generators

CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, text): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or report.when != "call" and not report.failed:
        return
    key = (marker.args[0], marker.args[1])
    ok = report.passed or report.skipped
    prev = CRITERIA.get(key, (True, []))
    failed = list(prev[1])
    if not ok:
        failed.append(item.name)
    CRITERIA[key] = (prev[0] and ok, failed)


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for (num, text), (ok, failed) in sorted(CRITERIA.items()):
        line = f"[{'PASS' if ok else 'FAIL'}] {num}. {text}"
        if failed:
            line += f"  (failing: {', '.join(failed)})"
        terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def basic2():
    return generators.client_server(2)


@pytest.fixture(scope="session")
def basic1():
    return generators.client_server(1)


@pytest.fixture(scope="session")
def client():
    return generators.client_std()


@pytest.fixture(scope="session")
def cs(client):
    return generators.cs_partition(client)


@pytest.fixture(scope="session")
def return1():
    return generators.client_server(1, "return")


@pytest.fixture(scope="session")
def simple1():
    return generators.client_server(1, "simple")

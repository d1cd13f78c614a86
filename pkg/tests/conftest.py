import pytest

# key -> (status, detail); status is PASS, FAIL or SKIP
ACCEPTANCE: dict[str, tuple[str, str]] = {}


def pytest_addoption(parser):
    parser.addoption("--run-slow", action="store_true", default=False,
                     help="run exhaustive checks that take hours")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--run-slow"):
        return
    reason = "hours of compute; use --run-slow"
    skip = pytest.mark.skip(reason=reason)
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)
            marker = item.get_closest_marker("criterion")
            if marker is not None:
                ACCEPTANCE[marker.args[0]] = ("SKIP", reason)


@pytest.fixture
def criterion(request):
    """Record one acceptance line: call with a detail string on success.

    A test that fails before recording is reported as FAIL automatically.
    """
    key = request.node.get_closest_marker("criterion").args[0]
    ACCEPTANCE[key] = ("FAIL", "did not complete")

    def record(detail):
        ACCEPTANCE[key] = ("PASS", detail)

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        status, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"[{status}] {key}: {detail}")

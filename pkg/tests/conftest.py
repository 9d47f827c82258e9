import pytest

from pg2ssg.generate import exhaustive_battery, random_battery

# acceptance id -> {"outcome": ..., "detail": ...}
_ACCEPTANCE = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(id): acceptance criterion checked by the test")


@pytest.fixture(scope="session")
def exhaustive_games():
    return exhaustive_battery(max_n=5, cap=10_000)


@pytest.fixture(scope="session")
def random_games():
    return random_battery(count=1000, max_n=8, seed=2024)


@pytest.fixture(scope="session")
def full_battery(exhaustive_games, random_games):
    return exhaustive_games + random_games


@pytest.fixture
def ac_detail(request):
    """Attach a one-line summary to the acceptance criterion of the running test."""
    marker = request.node.get_closest_marker("acceptance")

    def note(text):
        _ACCEPTANCE.setdefault(marker.args[0], {})["detail"] = text
    return note


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    entry = _ACCEPTANCE.setdefault(marker.args[0], {})
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        entry["outcome"] = "PASS" if rep.outcome == "passed" else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_ACCEPTANCE, key=lambda k: int(k.split("-")[1])):
        entry = _ACCEPTANCE[key]
        line = f"{key}: {entry.get('outcome', 'NOT RUN')}"
        if entry.get("detail"):
            line += f"  ({entry['detail']})"
        terminalreporter.write_line(line)

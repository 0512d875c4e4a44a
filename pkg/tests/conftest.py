import pytest

from lsto.mesh2d import build_rect_grid, cantilever_model


@pytest.fixture(scope="session")
def unit_square():
    return build_rect_grid((0.0, 0.0), (1.0, 1.0), 4, 4, (1, 2, 3, 4))


@pytest.fixture(scope="session")
def cantilever1():
    return cantilever_model(1)


_RESULTS = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance: end-to-end acceptance criterion")


def pytest_runtest_logreport(report):
    name = report.nodeid.rsplit("::", 1)[-1]
    if not name.startswith("test_criterion_"):
        return
    key = int(name.split("_")[2])
    failed = report.failed or (report.when == "call" and report.skipped)
    if report.when == "call" or failed:
        _RESULTS[key] = _RESULTS.get(key, True) and not failed


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_RESULTS):
        terminalreporter.write_line(f"criterion {key:2d}: {'PASS' if _RESULTS[key] else 'FAIL'}")

import sys
from pathlib import Path

from hypothesis import settings

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

_ACCEPTANCE_DOCS: dict = {}
_ACCEPTANCE_RESULTS: dict = {}


def pytest_collection_modifyitems(items):
    for item in items:
        if item.path.name == "test_acceptance.py":
            doc = (item.function.__doc__ or item.name).strip().splitlines()[0]
            _ACCEPTANCE_DOCS[item.nodeid] = doc


def pytest_runtest_logreport(report):
    if report.nodeid not in _ACCEPTANCE_DOCS:
        return
    if report.when == "call" or report.failed:
        prev = _ACCEPTANCE_RESULTS.get(report.nodeid)
        if prev != "FAIL":
            _ACCEPTANCE_RESULTS[report.nodeid] = "PASS" if report.passed else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for nodeid, doc in _ACCEPTANCE_DOCS.items():
        if nodeid in _ACCEPTANCE_RESULTS:
            terminalreporter.write_line(f"{_ACCEPTANCE_RESULTS[nodeid]:4}  {doc}")


import os

import pytest

from troplanar import census as cz


@pytest.fixture(scope="session")
def records():
    """Census records for genus 2..6, computed once per session."""

    class Lazy(dict):
        def __missing__(self, g):
            rec = cz.census(g)
            self[g] = rec
            return rec

    return Lazy()


def pytest_collection_modifyitems(config, items):
    if os.environ.get("TROPLANAR_SKIP_LONG") != "1":
        return
    skip = pytest.mark.skip(reason="long run skipped by TROPLANAR_SKIP_LONG=1")
    for item in items:
        if "long" in item.keywords:
            item.add_marker(skip)


_VERDICTS: dict[int, str] = {}


@pytest.fixture
def verdict():
    """Record a PASS/FAIL line for an acceptance criterion and fail on FAIL."""

    def record(number: int, ok: bool, detail: str) -> None:
        line = f"CRITERION {number:2d}: {'PASS' if ok else 'FAIL'} - {detail}"
        _VERDICTS[number] = line
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter):
    if not _VERDICTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in range(1, 13):
        terminalreporter.write_line(_VERDICTS.get(n, f"CRITERION {n:2d}: FAIL - not run (skipped or errored)"))

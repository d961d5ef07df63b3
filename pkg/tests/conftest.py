import datetime as dt
import sys
from pathlib import Path

import hypothesis
import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from cpcmap.ingest import ClassScheme, PatentRecord  # noqa: E402

np.seterr(all="raise")

hypothesis.settings.register_profile("default", max_examples=60, deadline=None)
hypothesis.settings.register_profile("fast", max_examples=10, deadline=None)
hypothesis.settings.load_profile("default")

ACCEPTANCE_RESULTS: list[tuple[str, bool, str]] = []


@pytest.fixture
def criterion():
    """Record one pass/fail line per acceptance criterion check."""

    def record(name: str, passed: bool, detail: str = "") -> bool:
        ACCEPTANCE_RESULTS.append((name, bool(passed), detail))
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, passed, detail in ACCEPTANCE_RESULTS:
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"[{status}] {name}" + (f" -- {detail}" if detail else ""))


@pytest.fixture
def abc_scheme():
    return ClassScheme.from_codes(["A01B", "B01C", "C07D"], ["SOIL WORKING", "MIXING", "HETEROCYCLIC COMPOUNDS"])


def rec(pid, classes, cited=(), city=None, date=dt.date(2016, 5, 1), **kw):
    return PatentRecord(pid, date, tuple(classes), tuple(cited), city=city, **kw)

"""Shared fixtures and the per-criterion PASS/FAIL summary."""

from __future__ import annotations

import os
from collections import OrderedDict
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", deadline=None, suppress_health_check=[HealthCheck.too_slow], derandomize=True
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

CORPUS = Path(__file__).resolve().parents[1] / "src" / "toricmirror" / "corpus"

_criteria: dict[str, tuple[int, str]] = {}
_outcomes: "OrderedDict[int, dict]" = OrderedDict()


@pytest.fixture
def corpus_dir() -> Path:
    return CORPUS


def pytest_collection_modifyitems(config, items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark is None:
            continue
        number, title = mark.args[0], mark.args[1]
        _criteria[item.nodeid] = (number, title)
        entry = _outcomes.setdefault(number, {"title": title, "passed": 0, "failed": 0, "skipped": 0})
        entry["title"] = title


def pytest_runtest_logreport(report):
    crit = _criteria.get(report.nodeid)
    if crit is None:
        return
    entry = _outcomes[crit[0]]
    if report.when == "call":
        entry["passed" if report.passed else "skipped" if report.skipped else "failed"] += 1
    elif report.failed:
        entry["failed"] += 1
    elif report.skipped and report.when == "setup":
        entry["skipped"] += 1


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_outcomes):
        e = _outcomes[number]
        status = "FAIL" if e["failed"] else ("PASS" if e["passed"] else "SKIP")
        terminalreporter.write_line(
            f"criterion {number:>2}: {status}  {e['title']}  ({e['passed']} passed, {e['failed']} failed)"
        )

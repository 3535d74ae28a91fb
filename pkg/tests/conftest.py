"""Shared fixtures and the per-criterion summary printed after the acceptance suite."""

from collections import OrderedDict

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

_CRITERIA: "OrderedDict[str, dict]" = OrderedDict()
_REPORT_MAP: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(cid, text): acceptance criterion this test pins")


def pytest_collection_modifyitems(session, config, items):
    for item in items:
        m = item.get_closest_marker("criterion")
        if m is not None:
            cid, text = m.args
            _CRITERIA.setdefault(cid, {"text": text, "tests": {}})
            _REPORT_MAP[item.nodeid] = cid


def pytest_runtest_logreport(report):
    # record the call phase, or a setup phase that failed or skipped
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    cid = _REPORT_MAP.get(report.nodeid)
    if cid is not None:
        _CRITERIA[cid]["tests"][report.nodeid] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for cid, entry in _CRITERIA.items():
        outcomes = list(entry["tests"].values())
        if not outcomes:
            status = "NOT RUN"
        elif all(o == "passed" for o in outcomes):
            status = "PASS"
        else:
            status = "FAIL"
        tr.write_line(f"{cid:5s} {status:7s} {entry['text']}  ({sum(o == 'passed' for o in outcomes)}/{len(outcomes)} checks)")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)

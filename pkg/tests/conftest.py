import re

import pytest

from ringpack.model import Instance, RingType, parse_instance

TINY3_TEXT = "4 4\n0.5 0.7 2\n1.0 1.2 1\n1.4 1.8 1\n"


def pytest_runtest_logreport(report):
    # one verdict line per acceptance criterion, outside stdout capture
    if report.when != "call":
        return
    match = re.search(r"test_criterion_(\d+)", report.nodeid)
    if match:
        outcome = "PASS" if report.passed else "FAIL"
        print(f"\n[criterion {match.group(1)}] {outcome}")


def make_instance(width, height, triples, name=""):
    return Instance(
        width, height, tuple(RingType(r, R, d) for r, R, d in triples), name=name
    )


@pytest.fixture
def tiny3():
    return parse_instance(TINY3_TEXT, name="TINY3")

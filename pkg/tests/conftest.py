from __future__ import annotations

import sys

import pytest

from heckesym.field import GF, QQ
from heckesym.linalg import Matrix

FIELDS = [QQ, GF(5), GF(7), GF(13)]


@pytest.fixture(params=FIELDS, ids=str)
def field(request):
    return request.param


def diag(f, *vals) -> Matrix:
    return Matrix.diag(f, [f(v) for v in vals])


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)

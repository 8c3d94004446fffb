
import pytest

from polaritongate.config import PAPER_DEFAULTS, build_medium
from polaritongate.eit import derive_eit

_ACCEPTANCE = []


class _Recorder:
    def __call__(self, criterion: str, ok: bool, detail: str = "") -> bool:
        _ACCEPTANCE.append((criterion, bool(ok), detail))
        return bool(ok)


@pytest.fixture
def record():
    return _Recorder()


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for criterion, ok, detail in _ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {criterion}  {detail}")


@pytest.fixture
def paper_values():
    return dict(PAPER_DEFAULTS)


@pytest.fixture
def paper_cfg():
    return build_medium(PAPER_DEFAULTS)


@pytest.fixture
def paper_der(paper_cfg):
    return derive_eit(paper_cfg)

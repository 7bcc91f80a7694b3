import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from noon_lab.elements import _sector_column, _sector_eigensystem  # noqa: E402

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def acceptance_log():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":")[1:])):
            terminalreporter.write_line(line)


@pytest.fixture(autouse=True, scope="session")
def _release_sector_caches():
    yield
    _sector_column.cache_clear()
    _sector_eigensystem.cache_clear()

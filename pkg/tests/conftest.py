import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from loopforge.catalog import catalog, catalog_names  # noqa: E402

SMALL = [n for n in catalog_names() if catalog(n).order <= 8]
UP_TO_16 = [n for n in catalog_names() if catalog(n).order <= 16]
GROUPS = ["Z_4", "V4", "S3", "D4", "Q8"]


@pytest.fixture(params=UP_TO_16)
def loop16(request):
    return catalog(request.param)


@pytest.fixture(params=SMALL)
def small_loop(request):
    return catalog(request.param)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for k in sorted(results):
            terminalreporter.write_line(results[k])

import os
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from langtrotter.elliptic import EllipticCurve, ap_table, load_or_compute  # noqa: E402

E11 = EllipticCurve(1, 1)


@pytest.fixture(scope="session")
def curve():
    return E11


@pytest.fixture(scope="session")
def table_1e5():
    return ap_table(E11, 10**5)


@pytest.fixture(scope="session")
def table_1e6():
    """The x = 10^6 table for E(1,1); computed once (about 2 minutes on one core) and cached
    under LT_CACHE_DIR, or ~/.cache/langtrotter."""
    return load_or_compute(E11, 10**6, cache_dir=os.environ.get("LT_CACHE_DIR"))


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)

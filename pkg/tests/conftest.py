import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from vilenkin.core import RadixSequence  # noqa: E402

DEMOS = Path(__file__).parent.parent / "demos"


@pytest.fixture
def walsh():
    return RadixSequence.walsh()


@pytest.fixture
def m23():
    return RadixSequence(period=(2, 3))


@pytest.fixture(params=["walsh", "m23", "m3", "prefixed"])
def any_radix(request):
    return {
        "walsh": RadixSequence.walsh(),
        "m23": RadixSequence(period=(2, 3)),
        "m3": RadixSequence(period=(3,)),
        "prefixed": RadixSequence(period=(2, 4), prefix=(3, 5)),
    }[request.param]


@pytest.fixture
def demos():
    return DEMOS


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)

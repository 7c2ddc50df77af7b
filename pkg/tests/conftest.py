import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "fixtures"
sys.path.insert(0, str(Path(__file__).resolve().parent))

from tropmirror.fixtures import box_ambient, genus2  # noqa: E402
from tropmirror.mirror import Mirror  # noqa: E402
from tropmirror.pipeline import parse_input  # noqa: E402


def load_job(name):
    return parse_input((FIXTURES / f"{name}.json").read_bytes())


HYPERSURFACE_FIXTURES = sorted(
    p.stem for p in FIXTURES.glob("*.json") if load_job(p.stem).mode != "ci"
)


@pytest.fixture(scope="session")
def g2():
    w = genus2()
    return Mirror(w, box_ambient(w))


@pytest.fixture(scope="session")
def fixture_dir():
    return FIXTURES


def pytest_terminal_summary(terminalreporter):
    acceptance = sys.modules.get("test_acceptance")
    if acceptance is None or not acceptance.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in acceptance.report_lines():
        terminalreporter.write_line(line)

import sys
from pathlib import Path

import pytest
from hypothesis import settings

from decoy_lm05.channel import ChannelParams

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", deadline=None)
settings.load_profile("default")


@pytest.fixture
def gys() -> ChannelParams:
    return ChannelParams()


@pytest.fixture
def perfect() -> ChannelParams:
    """Lossless, noiseless channel (eta = 1 at l = 0)."""
    return ChannelParams(eta_ab=1.0, y0=0.0, e_det=0.0)


ACCEPTANCE = pytest.StashKey[dict]()


@pytest.fixture
def acceptance(request):
    """Record one acceptance criterion and fail the test when it does not hold."""
    results = request.config.stash.setdefault(ACCEPTANCE, {})

    def record(number: int, ok: bool, detail: str) -> None:
        results[number] = (ok, detail)
        assert ok, f"criterion {number}: {detail}"

    return record


def pytest_terminal_summary(terminalreporter, config):
    results = config.stash.get(ACCEPTANCE, {})
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        ok, detail = results[number]
        terminalreporter.write_line(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}")

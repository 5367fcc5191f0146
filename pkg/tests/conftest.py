from __future__ import annotations

import os
import sys

import pytest
from hypothesis import HealthCheck, settings

# CCX_SEED pins hypothesis; without it runs are derandomized
_SEED = os.environ.get("CCX_SEED")

settings.register_profile(
    "ccx",
    max_examples=60,
    deadline=None,
    derandomize=_SEED is None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("ccx")


@pytest.hookimpl(tryfirst=True)
def pytest_configure(config):
    if _SEED is not None:
        config.option.hypothesis_seed = int(_SEED)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[key])

import numpy as np
import pytest

from meshwalk import DisorderSpec, WalkConfig, generate_phase_map

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def make_walk(n_steps, kind="ordered", seed=0, amplitude=np.pi, **kw):
    config = WalkConfig(n_steps, **kw)
    spec = DisorderSpec.for_walk(config, kind, seed, amplitude)
    return config, generate_phase_map(spec)


@pytest.fixture
def walk_factory():
    return make_walk

import os
from pathlib import Path

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from maxent_layout.generators import random_connected_graph

settings.register_profile("default", deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

# criterion id -> (passed, detail), filled in by test_acceptance.py
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"criterion {key:>2}: {'PASS' if ok else 'FAIL'}  {detail}")


DATA_DIRS = [Path(os.environ["MAXENT_DATA"])] if os.environ.get("MAXENT_DATA") else []
DATA_DIRS += [Path(__file__).parent / "data", Path(__file__).parent.parent / "data"]


def find_dataset(name):
    """Path of ``name`` as a METIS (.graph) or Matrix Market (.mtx) file, or None."""
    for d in DATA_DIRS:
        for suffix in (".graph", ".mtx"):
            p = d / (name + suffix)
            if p.exists():
                return p
    return None


@st.composite
def connected_graphs(draw, min_n=3, max_n=30):
    n = draw(st.integers(min_n, max_n))
    extra = draw(st.integers(0, 2 * n))
    seed = draw(st.integers(0, 2**32 - 1))
    return random_connected_graph(n, extra, seed=seed)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)

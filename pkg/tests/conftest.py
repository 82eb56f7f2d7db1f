import json
import os
import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, str(Path(__file__).parent))

from extremal_sp.fields import FieldSpec  # noqa: E402
from extremal_sp.geometry import build_geometry  # noqa: E402
from extremal_sp.tensor_model import sp_algebra  # noqa: E402

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", max_examples=400, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(scope="session")
def frozen():
    return json.loads((Path(__file__).parent / "data" / "oracle_values.json").read_text())


@pytest.fixture(scope="session")
def F3():
    return FieldSpec.prime(3)


@pytest.fixture(scope="session")
def F5():
    return FieldSpec.prime(5)


@pytest.fixture(scope="session")
def Q():
    return FieldSpec.rational()


@pytest.fixture(scope="session")
def sp4_f3(F3):
    return sp_algebra(F3, 2)


@pytest.fixture(scope="session")
def sp4_f3_geom(sp4_f3):
    return build_geometry(sp4_f3)


@pytest.fixture(scope="session")
def sp6_f3():
    return sp_algebra(FieldSpec.prime(3), 3)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not getattr(mod, "RESULTS", None):
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])

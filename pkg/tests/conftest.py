import time
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from flatendo.io import load_group, load_map

CORPUS = Path(__file__).resolve().parents[1] / "src" / "flatendo" / "corpus"

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(scope="session")
def corpus():
    return CORPUS


@pytest.fixture(scope="session")
def klein():
    return load_group(CORPUS / "klein.json")


@pytest.fixture(scope="session")
def klein_torsion():
    return load_group(CORPUS / "klein_torsion.json")


@pytest.fixture(scope="session")
def hw():
    return load_group(CORPUS / "hantzsche_wendt.json")


@pytest.fixture(scope="session")
def anosov():
    return load_group(CORPUS / "dim4_anosov.json")


@pytest.fixture(scope="session")
def klein_alpha():
    return load_map(CORPUS / "klein_alpha.json")


@pytest.fixture(scope="session")
def anosov_alpha():
    return load_map(CORPUS / "dim4_alpha.json")


@pytest.fixture(scope="session")
def hw_D():
    return load_map(CORPUS / "hw_D.json")


@pytest.fixture(scope="session")
def hw_phi():
    return load_map(CORPUS / "hw_phi_points.json")


def pytest_configure(config):
    config._acceptance_lines = []
    config._session_start = time.perf_counter()


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "_acceptance_lines", [])
    if not lines:
        return
    elapsed = time.perf_counter() - config._session_start
    terminalreporter.section("acceptance criteria")
    for line in lines:
        terminalreporter.write_line(line)
    verdict = "PASS" if elapsed < 300 else "FAIL"
    terminalreporter.write_line(f"criterion 7 (suite runtime): {verdict}  whole session {elapsed:.1f} s < 300 s")

from pathlib import Path

import numpy as np
import pytest

from perron_roots.textio import read_factorization, read_matrix

DATA = Path(__file__).parent / "data"


def random_similar(blocks_matrix, rng, cond_max=1e3):
    """``V J V^{-1}`` for a random well-conditioned real ``V``."""
    n = blocks_matrix.shape[0]
    while True:
        V = rng.standard_normal((n, n))
        if np.linalg.cond(V) < cond_max:
            return V @ blocks_matrix @ np.linalg.inv(V)


def random_primitive(rng, n, kind="positive"):
    """Positive, or sparse nonnegative with positive diagonal and a full cycle (hence primitive)."""
    if kind == "positive":
        return rng.uniform(0.05, 1.0, (n, n))
    mask = rng.random((n, n)) < 0.35
    perm = rng.permutation(n)
    for i in range(n):
        mask[perm[i], perm[(i + 1) % n]] = True
    mask[0, 0] = True
    return np.where(mask, rng.uniform(0.2, 1.0, (n, n)), 0.0)


@pytest.fixture(scope="session")
def data_dir():
    return DATA


@pytest.fixture(scope="session")
def m5():
    A = read_matrix(DATA / "m5_A.txt")
    R, blocks = read_factorization(DATA / "m5_factorization.txt")
    return A, R, blocks


@pytest.fixture(scope="session")
def m9():
    A = read_matrix(DATA / "m9_A.txt")
    R, blocks = read_factorization(DATA / "m9_factorization.txt")
    return A, R, blocks


@pytest.fixture(scope="session")
def m5_reference_roots():
    return read_matrix(DATA / "m5_root_00.txt"), read_matrix(DATA / "m5_root_11.txt")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


# --- acceptance-criterion reporting -------------------------------------------------

def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): one numbered acceptance criterion")
    config._acceptance_results = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    number, title = marker.args
    results = item.config._acceptance_results
    if rep.when == "call" or (rep.when == "setup" and rep.failed):
        results[number] = (title, "PASS" if rep.passed else "FAIL")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    results = getattr(config, "_acceptance_results", {})
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        title, verdict = results[number]
        terminalreporter.write_line(f"criterion {number}: {verdict} - {title}")

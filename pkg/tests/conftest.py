import time

import pytest

from excheck import expsums as es


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: full desk-scale runs (seconds to minutes)")


@pytest.fixture(scope="session")
def envelope_maxima():
    """Max over k <= 256 of sup_{N <= 2^20} |S_N(k)| / sqrt(k log 2k), for five seeds, and the wall time."""
    t0 = time.perf_counter()
    maxima = [max(r[3] for r in es.envelope_table(es.ScrambleOracle(s), 256, 1 << 20))
              for s in es.derived_seeds()]
    return {"maxima": maxima, "seconds": time.perf_counter() - t0}

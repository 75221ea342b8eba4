import pytest

from spcodes.cli import ordered_partitions, sweep
from spcodes.partitions import double, linear_partition

SWEEP_SEED = 0


@pytest.fixture(scope="session")
def partitions():
    return ordered_partitions()


@pytest.fixture(scope="session")
def linear_code():
    L = linear_partition()
    return double(L, L, range(8))


@pytest.fixture(scope="session")
def kappa_codes(partitions):
    """A few distinct codes for each kernel dimension 5..9, from a seeded sweep."""
    parts = [(f"p{k:04d}", P) for k, P in enumerate(partitions)]
    hits, _ = sweep(parts, [5, 6, 7, 8, 9], budget=20000, seed=SWEEP_SEED, per_kappa=3)
    return {k: [h[3] for h in v] for k, v in hits.items()}


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])

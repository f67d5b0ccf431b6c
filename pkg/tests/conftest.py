import pytest

from rvcheck.algorithms import builtin
from rvcheck.scheduling import SCHEDULER_NAMES
from rvcheck.checker import ExploreOptions, explore


@pytest.fixture(scope="session")
def cell():
    """Memoized explore() keyed by algorithm name, scheduler name, and
    options, so the acceptance criteria can share one sweep of the full
    verdict matrix instead of rebuilding graphs per test."""
    cache = {}

    def run(algo_name, sched_name, **options):
        key = (algo_name, sched_name, tuple(sorted(options.items())))
        if key not in cache:
            cache[key] = explore(
                builtin(algo_name),
                SCHEDULER_NAMES[sched_name],
                ExploreOptions(**options),
            )
        return cache[key]

    return run

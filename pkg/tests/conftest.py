"""Shared fixtures: the expensive artifacts are built once per session."""

import pytest

import ringgame as rg
from ringgame.simulate import SimConfig, run_batch

ACCEPTANCE_SEED = 0


@pytest.fixture(scope="session")
def master_table():
    """Exact f/m2/g over all 192 states, corrected variance mode."""
    return rg.solve_table(None)


@pytest.fixture(scope="session")
def root_table():
    """Exact f/m2/g over the closure of the standard start."""
    return rg.solve_table(rg.ROOT)


@pytest.fixture(scope="session")
def paper_table():
    """Variance in the published mode, over all states."""
    return rg.variance_table(rg.expectation_table(None), "paper")


@pytest.fixture(scope="session")
def big_game_batch_timed():
    """The 1e5-sample seeded game batch plus its wall-clock cost."""
    import time

    began = time.perf_counter()
    summary = run_batch(SimConfig(start=rg.ROOT, samples=100_000, seed=ACCEPTANCE_SEED))
    return summary, time.perf_counter() - began


@pytest.fixture(scope="session")
def big_game_batch(big_game_batch_timed):
    return big_game_batch_timed[0]


@pytest.fixture(scope="session")
def solution4():
    """Full numeric class solve at n=4."""
    return rg.full_solve_numeric(4)

import sys
from pathlib import Path

import numpy as np
import pytest

import fairstops as fs

sys.path.insert(0, str(Path(__file__).parent))

#: One line per acceptance criterion, echoed after the run (see test_acceptance).
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)


def corpus_sizes(seed: int) -> tuple[int, int, int]:
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 21))
    m = int(rng.integers(2, 11))
    k = int(rng.integers(2, min(5, m) + 1))
    return n, m, k


@pytest.fixture(scope="session")
def corpus():
    """100 seeded random unit-square instances with free transit."""
    return [fs.random_euclidean(*corpus_sizes(seed), seed) for seed in range(100)]


@pytest.fixture(scope="session")
def corpus_random_transit():
    """Same sizes and seeds, transit drawn as a repaired random metric."""
    return [
        fs.random_euclidean(*corpus_sizes(seed), seed, transit="random")
        for seed in range(100)
    ]


@pytest.fixture(scope="session")
def gc_outputs(corpus):
    return [fs.gc_trsp(inst)[0] for inst in corpus]


@pytest.fixture(scope="session")
def eca_outputs(corpus):
    return [fs.eca(inst)[0] for inst in corpus]


@pytest.fixture(scope="session")
def hybrid_outputs(corpus):
    return {
        lam: [fs.hybrid(inst, lam)[0] for inst in corpus]
        for lam in (0.25, 0.5, 1.0)
    }

import numpy as np
import pytest
from hypothesis import settings

from topofilt.poset import Poset

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


def chain(m):
    return Poset(np.triu(np.ones((m, m), dtype=bool)))


def antichain(m):
    return Poset(np.eye(m, dtype=bool))


def diamond():
    # a=0, b=1 below c=2, d=3
    return Poset.from_relations(4, [(0, 2), (0, 3), (1, 2), (1, 3)])


def random_poset(rng, m, density=0.4):
    """Random order: upper-triangular relation on a random linear extension, then closed."""
    rel = np.triu(rng.random((m, m)) < density, 1)
    perm = rng.permutation(m)
    pairs = [(int(perm[i]), int(perm[j])) for i, j in np.argwhere(rel)]
    return Poset.from_relations(m, pairs)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def record():
    """Log one PASS/FAIL line for an acceptance criterion and return the verdict."""
    def _record(number: int, title: str, ok: bool, detail: str = "") -> bool:
        line = f"acceptance #{number:<2} {'PASS' if ok else 'FAIL'}  {title}"
        if detail:
            line += f"  ({detail})"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok
    return _record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

import numpy as np
import pytest

from posmoments.bipartite import BipartiteState

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


@pytest.fixture
def acceptance_log():
    def record(tag: str, ok: bool, message: str) -> None:
        ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] {tag}: {message}")

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def typed_family_state(a: float) -> np.ndarray:
    """The 9x9 family matrix typed in entry by entry, independent of the generator."""
    rows = [
        [1, 0, 0, 0, 1, 0, 0, 0, 1],
        [0, a, 0, 1, 0, 0, 0, 0, 0],
        [0, 0, 2, 0, 0, 0, 1, 0, 0],
        [0, 1, 0, 2, 0, 0, 0, 0, 0],
        [1, 0, 0, 0, 1, 0, 0, 0, 1],
        [0, 0, 0, 0, 0, a, 0, 1, 0],
        [0, 0, 1, 0, 0, 0, a, 0, 0],
        [0, 0, 0, 0, 0, 1, 0, 2, 0],
        [1, 0, 0, 0, 1, 0, 0, 0, 1],
    ]
    return np.array(rows, dtype=float) / (3 * (3 + a))


def typed_family_realigned(a: float) -> np.ndarray:
    rows = [
        [1, 0, 0, 0, a, 0, 0, 0, 2],
        [0, 1, 0, 1, 0, 0, 0, 0, 0],
        [0, 0, 1, 0, 0, 0, 1, 0, 0],
        [0, 1, 0, 1, 0, 0, 0, 0, 0],
        [2, 0, 0, 0, 1, 0, 0, 0, a],
        [0, 0, 0, 0, 0, 1, 0, 1, 0],
        [0, 0, 1, 0, 0, 0, 1, 0, 0],
        [0, 0, 0, 0, 0, 1, 0, 1, 0],
        [a, 0, 0, 0, 2, 0, 0, 0, 1],
    ]
    return np.array(rows, dtype=float) / (3 * (3 + a))


def typed_gamma_output(a: float) -> np.ndarray:
    rows = [
        [1 + a, 0, 0, 0, -1, 0, 0, 0, -1],
        [0, a + 2, 0, -1, 0, 0, 0, 0, 0],
        [0, 0, 2 + 1, 0, 0, 0, -1, 0, 0],
        [0, -1, 0, 2 + 1, 0, 0, 0, 0, 0],
        [-1, 0, 0, 0, 1 + a, 0, 0, 0, -1],
        [0, 0, 0, 0, 0, a + 2, 0, -1, 0],
        [0, 0, -1, 0, 0, 0, a + 2, 0, 0],
        [0, 0, 0, 0, 0, -1, 0, 2 + 1, 0],
        [-1, 0, 0, 0, -1, 0, 0, 0, 1 + a],
    ]
    return np.array(rows, dtype=float) / (6 * (3 + a))


def random_density(dimA: int, dimB: int, rng) -> BipartiteState:
    n = dimA * dimB
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    m = g @ g.conj().T
    return BipartiteState(dimA, dimB, m / np.trace(m).real)

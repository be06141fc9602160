import numpy as np
import pytest

from strongops.constructions import build, computational_basis


@pytest.fixture(scope="session")
def asym3():
    return build("FourAsym", (3, 3, 3, 3))


@pytest.fixture(scope="session")
def sym3():
    return build("FourSym", (3, 3, 3, 3))


@pytest.fixture(scope="session")
def basis3():
    return computational_basis((3, 3, 3, 3))


def normalized_rows(vectors):
    """Canonical, hashable form of a set of vectors for set comparison."""
    out = set()
    for v in vectors:
        v = np.asarray(v, dtype=complex)
        out.add(tuple(np.round(v, 9).tolist()))
    return out


ACCEPTANCE_LINES: dict[int, str] = {}


@pytest.fixture
def record_criterion():
    def record(number: int, ok: bool, detail: str):
        ACCEPTANCE_LINES[number] = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
        print(ACCEPTANCE_LINES[number])
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[k])

import cmath

import pytest

from gl2triple.characters import MultChar, enumerate_unit_characters
from gl2triple.context import PadicContext
from gl2triple.reps import RepSpec


@pytest.fixture(scope="session")
def ctx2():
    return PadicContext(p=2, precision=6, budget=2 * 10**6)


@pytest.fixture(scope="session")
def ctx3():
    return PadicContext(p=3, precision=6, budget=2 * 10**6)


@pytest.fixture(scope="session")
def ctx5():
    return PadicContext(p=5, precision=6, budget=2 * 10**6)


def ramified_unit(p, m=1):
    cands = [c for c in enumerate_unit_characters(p, m) if c.m == m]
    if not cands:
        raise RuntimeError(f"no conductor-{m} character for p={p}")
    return cands[0]


def unram(p, z):
    return MultChar.make(p, z)


@pytest.fixture(scope="session")
def vt00n_p2():
    """V1, V2 unramified, V3 special of conductor 1, at p = 2."""
    p = 2
    v1 = RepSpec.principal(unram(p, 1.3 + 0.2j), unram(p, 0.5 - 0.1j))
    v2 = RepSpec.principal(unram(p, 0.8 - 0.3j), unram(p, 1.9 + 0.4j))
    eta3 = unram(p, cmath.sqrt(1 / (v1.omega * v2.omega).unramified))
    v3 = RepSpec.special_quotient(eta3)
    return v1, v2, v3


@pytest.fixture(scope="session")
def vt00n_p3_cond2():
    """V1, V2 unramified, V3 ramified principal of conductor 2, at p = 3."""
    p = 3
    th = ramified_unit(p)
    v1 = RepSpec.principal(unram(p, 1.3 + 0.2j), unram(p, 0.5 - 0.1j))
    v2 = RepSpec.principal(unram(p, 0.8 - 0.3j), unram(p, 1.9 + 0.4j))
    a3 = 1.1 + 0.7j
    b3 = 1 / ((v1.omega * v2.omega).unramified * a3)
    v3 = RepSpec.principal(MultChar(complex(a3), th),
                           MultChar(complex(b3), th.inv()))
    return v1, v2, v3

from functools import lru_cache

import pytest

from detgb.engine import detgb
from detgb.gncomplex import GNData, LinearMatrix

P = 2147483647
SEEDS = (1, 2, 3)

ACCEPTANCE: dict[int, tuple[bool, str]] = {}


@lru_cache(maxsize=None)
def instance(n: int, seed: int, p: int = P) -> LinearMatrix:
    return LinearMatrix.random(n, p, seed)


@lru_cache(maxsize=None)
def gn_data(n: int, seed: int) -> GNData:
    return GNData(instance(n, seed))


@lru_cache(maxsize=None)
def run(n: int, seed: int, structured: bool = True, z_source: str = "gn"):
    return detgb(instance(n, seed), structured=structured, z_source=z_source, gn=gn_data(n, seed))


def record(criterion: int, ok: bool, detail: str) -> None:
    ACCEPTANCE[criterion] = (ok, detail)
    print(f"criterion {criterion}: {'PASS' if ok else 'FAIL'} - {detail}")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'} - {detail}")


@pytest.fixture
def p():
    return P

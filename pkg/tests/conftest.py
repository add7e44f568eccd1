import re

import pytest

from scqm.rbh import build_cubic_rbh, build_trivial_model
from scqm.symmetry import derive_moveset, single_qubit_moves


@pytest.fixture(scope="session")
def rbh2():
    return build_cubic_rbh(2)


@pytest.fixture(scope="session")
def rbh3():
    return build_cubic_rbh(3)


@pytest.fixture(scope="session")
def moves2(rbh2):
    return derive_moveset(rbh2, 1)


@pytest.fixture(scope="session")
def moves3(rbh3):
    return derive_moveset(rbh3, 1)


@pytest.fixture(scope="session")
def free2(rbh2):
    return single_qubit_moves(rbh2)


@pytest.fixture(scope="session")
def trivial2():
    return build_trivial_model(2)


_CRIT = re.compile(r"test_criterion_(\d+)")


def pytest_terminal_summary(terminalreporter):
    rows = {}
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            hit = _CRIT.search(getattr(rep, "nodeid", ""))
            if not hit or rep.when not in ("call", "setup"):
                continue
            if rep.when == "setup" and rep.passed:
                continue
            detail = "; ".join(str(v) for k, v in rep.user_properties if k == "detail")
            rows[int(hit.group(1))] = ("PASS" if rep.passed else "FAIL", detail)
    if not rows:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(rows):
        verdict, detail = rows[n]
        line = f"criterion {n:2d}: {verdict}"
        terminalreporter.write_line(line + (f"  ({detail})" if detail else ""))

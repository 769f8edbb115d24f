import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from oracles import data  # noqa: E402

CRITERIA = {
    1: "adjunction suite on 200 random homomorphisms",
    2: "surjective closure equals join with kernel",
    3: "free algebra sizes",
    4: "right uniform interpolants, all principal Sigma",
    5: "interpolation square commutes",
    6: "inverse images are congruences, right interpolants exist",
    7: "l-group elimination, fuzz and certificates",
    8: "residuals and distributivity of Con F",
    9: "model-completion axiom obligations",
    10: "determinism of reports",
}

_results: dict[int, tuple[bool, str]] = {}


@pytest.fixture
def record():
    """``record(k, passed, detail)`` notes the outcome of acceptance criterion ``k``."""

    def _record(k, passed, detail=""):
        _results[k] = (bool(passed), detail)

    return _record


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for k, label in CRITERIA.items():
        if k in _results:
            ok, detail = _results[k]
            line = f"criterion {k:>2} {'PASS' if ok else 'FAIL'}  {label}"
            if detail:
                line += f"  [{detail}]"
        else:
            line = f"criterion {k:>2} NOT RUN  {label}"
        terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def ba2():
    return data("ba2")


@pytest.fixture(scope="session")
def bdl2():
    return data("bdl2")


@pytest.fixture(scope="session")
def ba4():
    return data("ba4")


@pytest.fixture(scope="session")
def m3():
    return data("m3")


@pytest.fixture(scope="session")
def chain3():
    return data("chain3")


@pytest.fixture(scope="session")
def BA(ba2):
    from unifint.interp import VarietyEngine

    return VarietyEngine(ba2)


@pytest.fixture(scope="session")
def BDL(bdl2):
    from unifint.interp import VarietyEngine

    return VarietyEngine(bdl2)

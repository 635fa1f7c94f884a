import math

import numpy as np
import pytest

ACCEPTANCE_RESULTS = {}


def record_criterion(number, passed, detail):
    ACCEPTANCE_RESULTS[number] = (passed, detail)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_RESULTS):
        passed, detail = ACCEPTANCE_RESULTS[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if passed else 'FAIL'}  {detail}")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_qubit(rng):
    from orthospeed.states import TwoQubitState

    c = rng.normal(size=4) + 1j * rng.normal(size=4)
    return TwoQubitState(c / np.linalg.norm(c))


def random_boson(rng):
    from orthospeed.states import BosonCoeffMatrix

    v = rng.normal(size=3) + 1j * rng.normal(size=3)
    v /= math.sqrt(2.0 * (abs(v[0]) ** 2 + 2 * abs(v[1]) ** 2 + abs(v[2]) ** 2))
    return BosonCoeffMatrix.from_entries(*v)


def random_fermion(rng):
    from orthospeed.states import FermionCoeffMatrix

    w = rng.normal(size=6) + 1j * rng.normal(size=6)
    w /= 2.0 * np.linalg.norm(w)
    return FermionCoeffMatrix.from_entries(list(w))


RANDOM_STATE = {"qubit": random_qubit, "boson": random_boson, "fermion": random_fermion}

import numpy as np
import pytest

from qpsym.problem import build_problem, canonicalize

EX1_A = np.diag([1.0, 0.8])
EX1_B = [np.array([[0.5, 2.0], [2.0, 0.5]]), np.array([[0.5, -2.0], [-2.0, 0.5]])]
EX2_A = np.eye(3)
EX2_B = [np.diag([2.0, 2.0, 0.0]), np.diag([-1.0, -1.0, 1.0])]

ACCEPTANCE_RESULTS = {}


def rotation2(a):
    """exp(a G) with G = [[0, 1], [-1, 0]]."""
    return np.array([[np.cos(a), np.sin(a)], [-np.sin(a), np.cos(a)]])


def rotation_axis3(a):
    """Rotation about the third axis, the continuous family of the second example."""
    return np.array([[np.cos(a), -np.sin(a), 0.0], [np.sin(a), np.cos(a), 0.0], [0.0, 0.0, 1.0]])


@pytest.fixture(scope="session")
def ex1():
    return build_problem(EX1_A, EX1_B)


@pytest.fixture(scope="session")
def ex2():
    return build_problem(EX2_A, EX2_B)


@pytest.fixture(scope="session")
def ex1_canon(ex1):
    return canonicalize(ex1)


@pytest.fixture(scope="session")
def ex2_canon(ex2):
    return canonicalize(ex2)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_RESULTS):
        ok, text = ACCEPTANCE_RESULTS[key]
        terminalreporter.write_line(f"criterion {key}: {'PASS' if ok else 'FAIL'}  {text}")

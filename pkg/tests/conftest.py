import numpy as np
import pytest

from cxsplit.problems import make_problem, reference_solution


@pytest.fixture(scope="session")
def osc_ref():
    problem = make_problem("osc")
    return problem, reference_solution(problem)


@pytest.fixture(scope="session")
def osc_ref_eps01():
    problem = make_problem("osc", epsilon=0.1)
    return problem, reference_solution(problem)


@pytest.fixture(scope="session")
def osc_ref_eps0():
    problem = make_problem("osc", epsilon=0.0)
    return problem, reference_solution(problem)


@pytest.fixture(scope="session")
def parabolic_ref():
    problem = make_problem("parabolic")
    return problem, reference_solution(problem)


@pytest.fixture(scope="session")
def fisher_ref():
    problem = make_problem("fisher")
    return problem, reference_solution(problem)


def dense_expm(mat):
    """Scaling-and-squaring matrix exponential (Taylor core), test oracle."""
    mat = np.asarray(mat, dtype=complex)
    norm = np.linalg.norm(mat, np.inf)
    squarings = max(0, int(np.ceil(np.log2(max(norm, 1e-300)))) + 4)
    small = mat / 2.0 ** squarings
    out = np.eye(mat.shape[0], dtype=complex)
    term = np.eye(mat.shape[0], dtype=complex)
    for k in range(1, 25):
        term = term @ small / k
        out = out + term
    for _ in range(squarings):
        out = out @ out
    return out

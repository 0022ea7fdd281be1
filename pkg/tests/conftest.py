import numpy as np
import pytest

from lqreduce import LQProblem


def random_problem(rng, n, m, spd_r=False, singular_r=False):
    """Random LQ problem with symmetric Q, R; optionally SPD or singular R."""
    a = rng.standard_normal((n, n))
    b = rng.standard_normal((n, m))
    q = rng.standard_normal((n, n))
    q = (q + q.T) / 2.0
    nm = rng.standard_normal((n, m))
    if spd_r:
        w = rng.standard_normal((m, m))
        r = w @ w.T + np.eye(m)
    else:
        r = rng.standard_normal((m, m))
        r = (r + r.T) / 2.0
        if singular_r:
            r[:, -1] = 0.0
            r[-1, :] = 0.0
    return LQProblem(A=a, B=b, Q=q, N=nm, R=r)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)

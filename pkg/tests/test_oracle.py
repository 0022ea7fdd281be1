import numpy as np
import pytest

from lqreduce import (
    LQProblem,
    compare_final_subspaces,
    gen_exp2,
    gen_exp3,
    recursive_reduce,
    reduce,
    subspace_angle,
)
from conftest import random_problem

TOL = 1e-6


class TestRecursiveReduce:
    def test_regular_problem_has_only_primaries(self, rng):
        prob = random_problem(rng, 3, 2, spd_r=True)
        out = recursive_reduce(prob, TOL)
        assert out.index_k == 1
        assert out.final_constraints.shape[0] == 2
        primary = np.hstack([-prob.N.T, prob.B.T, -prob.R])
        assert subspace_angle(out.final_constraints, primary, TOL) < 1e-10

    def test_hand_iterated_1x1_chain(self):
        prob = LQProblem(A=[[0.0]], B=[[1.0]], Q=[[1.0]], N=[[0.0]], R=[[0.0]])
        out = recursive_reduce(prob, TOL)
        assert out.index_k == 3
        # the chain p, x, u spans all of (x, p, u)
        assert subspace_angle(out.final_constraints, np.eye(3), TOL) < 1e-10

    def test_sum_constraint_family(self):
        out = recursive_reduce(gen_exp2(3), TOL)
        ref = np.array(
            [
                [1.0, 1, 1, 0, 0, 0, 0],
                [0.0, 0, 0, 1, 1, 1, 0],
                [0.0, 0, 0, 0, 0, 0, 1],
            ]
        )
        assert out.index_k == 3
        assert subspace_angle(out.final_constraints, ref, TOL) < 1e-10

    def test_nilpotent_family_index(self):
        for n in (2, 4, 7):
            out = recursive_reduce(gen_exp3(n), TOL)
            assert out.index_k == n
            assert out.final_constraints.shape[0] == n

    def test_stabilization_is_genuine(self, rng):
        # one more differentiation pass of the final rows adds nothing
        from lqreduce import equilibrate_rows, independent_rows, initial_matrices
        from lqreduce.linalg import numerical_ker

        prob = random_problem(rng, 4, 2, singular_r=True)
        out = recursive_reduce(prob, TOL)
        init = initial_matrices(prob)
        rows = out.final_constraints
        two_n = 2 * prob.n
        ker, _ = numerical_ker(rows[:, two_n:].T, TOL)
        cands = ker.T @ np.hstack([rows[:, :two_n] @ init.g0, rows[:, :two_n] @ init.z0])
        stacked = independent_rows(
            equilibrate_rows(np.vstack([rows, cands]), TOL), TOL
        )
        assert stacked.shape[0] == rows.shape[0]


class TestCompareFinalSubspaces:
    def test_regular_same_problem(self, rng):
        prob = random_problem(rng, 3, 2, spd_r=True)
        assert compare_final_subspaces(
            recursive_reduce(prob, TOL), reduce(prob, TOL), TOL
        ) < 1e-10

    def test_singular_same_problem(self):
        prob = LQProblem(A=[[0.0]], B=[[1.0]], Q=[[1.0]], N=[[0.0]], R=[[0.0]])
        assert compare_final_subspaces(
            recursive_reduce(prob, TOL), reduce(prob, TOL), TOL
        ) < 1e-8

    def test_dimension_mismatch_raised(self, rng):
        from lqreduce import DimensionMismatch

        p1 = random_problem(rng, 2, 1, spd_r=True)
        p2 = random_problem(rng, 2, 2, spd_r=True)
        with pytest.raises(DimensionMismatch):
            compare_final_subspaces(recursive_reduce(p1, TOL), reduce(p2, TOL), TOL)

    def test_mismatched_problems_detected(self):
        # orthogonal primary constraints: p1 = 0 versus p2 = 0
        common = dict(Q=np.zeros((2, 2)), N=np.zeros((2, 1)), R=[[1.0]])
        p1 = LQProblem(A=np.zeros((2, 2)), B=[[1.0], [0.0]], **common)
        p2 = LQProblem(A=np.zeros((2, 2)), B=[[0.0], [1.0]], **common)
        angle = compare_final_subspaces(
            recursive_reduce(p1, TOL), reduce(p2, TOL), TOL
        )
        assert angle > 0.1

    def test_equivalence_on_random_singular_problems(self, rng):
        for _ in range(30):
            prob = random_problem(
                rng, int(rng.integers(2, 7)), int(rng.integers(1, 5)), singular_r=True
            )
            angle = compare_final_subspaces(
                recursive_reduce(prob, TOL), reduce(prob, TOL), TOL
            )
            assert angle < 1e-8

    def test_known_families_agree(self):
        for prob in (gen_exp2(5), gen_exp3(5)):
            angle = compare_final_subspaces(
                recursive_reduce(prob, TOL), reduce(prob, TOL), TOL
            )
            assert angle < 1e-8

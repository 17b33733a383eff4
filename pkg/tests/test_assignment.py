import random
from fractions import Fraction
from itertools import permutations

import numpy as np
import pytest

from nedist.assignment import (
    matching_with_duals,
    min_cost_perfect_matching,
)
from nedist.errors import UsageError


def brute_force(matrix):
    n = len(matrix)
    best = None
    for perm in permutations(range(n)):
        cost = sum(matrix[i][perm[i]] for i in range(n))
        key = (cost, perm)
        if best is None or key < best:
            best = key
    return best  # (min cost, lexicographically smallest optimal assignment)


def test_trivial_cases():
    assert min_cost_perfect_matching([[0]]) == (0, [0])
    assert min_cost_perfect_matching([[0, 1], [1, 0]]) == (0, [0, 1])


def test_documented_three_by_three():
    cost, f = min_cost_perfect_matching([[1, 2, 3], [2, 4, 6], [3, 6, 9]])
    assert cost == 10
    assert f == [2, 1, 0]


def test_matches_brute_force_on_random_int_matrices():
    rng = random.Random(11)
    for _ in range(300):
        n = rng.randint(1, 5)
        m = [[rng.randint(0, 6) for _ in range(n)] for _ in range(n)]
        cost, f = min_cost_perfect_matching(m)
        bcost, bf = brute_force(m)
        assert cost == bcost
        assert f == list(bf)


def test_matches_brute_force_on_fraction_matrices():
    rng = random.Random(13)
    for _ in range(60):
        n = rng.randint(1, 4)
        m = [[Fraction(rng.randint(0, 9), rng.randint(1, 4)) for _ in range(n)]
             for _ in range(n)]
        cost, f = min_cost_perfect_matching(m)
        bcost, bf = brute_force(m)
        assert cost == bcost
        assert f == list(bf)


def test_numpy_input_and_large_instance():
    rng = np.random.default_rng(5)
    W = rng.integers(0, 50, size=(60, 60))
    cost, f = min_cost_perfect_matching(W)
    assert sorted(f) == list(range(60))
    assert cost == int(W[np.arange(60), f].sum())
    # cost must not beat the scipy reference optimum
    from scipy.optimize import linear_sum_assignment
    r, c = linear_sum_assignment(W)
    assert cost == int(W[r, c].sum())


def test_dual_feasibility_and_tightness():
    rng = np.random.default_rng(7)
    for n in (3, 8, 30, 50):
        W = rng.integers(0, 20, size=(n, n))
        cost, f, u, v = matching_with_duals(W)
        for i in range(n):
            for j in range(n):
                assert u[i] + v[j] <= W[i, j]
            assert u[i] + v[f[i]] == W[i, f[i]]
        assert cost == sum(u) + sum(v)


def test_lex_refinement_under_heavy_ties():
    # all-equal matrix: every permutation is optimal, identity is smallest
    for n in (2, 5, 9, 30):
        cost, f = min_cost_perfect_matching(np.full((n, n), 3, dtype=np.int64))
        assert f == list(range(n))
        assert cost == 3 * n


def test_input_validation():
    with pytest.raises(UsageError):
        min_cost_perfect_matching([])
    with pytest.raises(UsageError):
        min_cost_perfect_matching([[1, 2]])
    with pytest.raises(UsageError):
        min_cost_perfect_matching([[1, -2], [3, 4]])
    with pytest.raises(UsageError):
        min_cost_perfect_matching(np.array([[1, -2], [3, 4]]))

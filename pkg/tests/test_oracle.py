"""Brute-force oracle: atom tables, solution counts, subspace sign vectors."""

import random
from fractions import Fraction
from itertools import product

import pytest

from acbounds.exactmat import BudgetExceededError, ExactMatrix, rank
from acbounds.oracle import (
    atom_distribution,
    atom_max,
    combinatorial_dimension,
    count_sign_solutions,
    levy_lower_bound,
)
from acbounds.system import VectorSystem

H24 = ExactMatrix.from_rows([[1, 1, 1, 1], [1, 1, -1, -1]])


def naive_atom_distribution(vectors):
    """Oracle for the oracle: direct iteration over all 2^n sign vectors."""
    n = len(vectors)
    d = len(vectors[0])
    counts = {}
    for signs in product((1, -1), repeat=n):
        p = tuple(sum(s * v[c] for s, v in zip(signs, vectors)) for c in range(d))
        counts[p] = counts.get(p, 0) + 1
    return {p: Fraction(c, 1 << n) for p, c in counts.items()}


def test_atom_distribution_two_coins():
    sys = VectorSystem.from_vectors([(1,), (1,)])
    table = atom_distribution(sys)
    assert table.probs == {
        (-2,): Fraction(1, 4),
        (0,): Fraction(1, 2),
        (2,): Fraction(1, 4),
    }
    assert table.total_mass == 1


def test_atom_distribution_single_vector():
    table = atom_distribution(VectorSystem.from_vectors([(3, -1)]))
    assert sorted(table.probs.values()) == [Fraction(1, 2), Fraction(1, 2)]


def test_atom_distribution_matches_naive():
    rng = random.Random(21)
    for _ in range(40):
        d = rng.randint(1, 3)
        n = rng.randint(1, 10)
        vectors = [
            tuple(rng.randint(-2, 2) for _ in range(d)) for _ in range(n)
        ]
        sys = VectorSystem.from_vectors(vectors)
        assert atom_distribution(sys).probs == naive_atom_distribution(vectors)


def test_atom_distribution_matches_naive_wider():
    rng = random.Random(22)
    vectors = [(rng.randint(-2, 2), rng.randint(-2, 2)) for _ in range(16)]
    sys = VectorSystem.from_vectors(vectors)
    assert atom_distribution(sys).probs == naive_atom_distribution(vectors)


def test_atom_masses_are_dyadic():
    sys = VectorSystem.from_vectors([(1, 0), (1, 1), (0, 2)])
    for mass in atom_distribution(sys).probs.values():
        assert (8 * mass).denominator == 1


def test_atom_max_equal_weights_hits_central_binomial():
    sys = VectorSystem.from_vectors([(2,)] * 10)
    assert atom_max(sys) == Fraction(252, 1024)


def test_atom_max_dyadic_weights_all_sums_distinct():
    vectors = [(2**i,) for i in range(8)]
    assert atom_max(VectorSystem.from_vectors(vectors)) == Fraction(1, 256)


def test_atom_cap():
    sys = VectorSystem.from_vectors([(1,)] * 12)
    with pytest.raises(BudgetExceededError):
        atom_distribution(sys, cap=10)


def test_empty_system_rejected_at_construction():
    with pytest.raises(ValueError):
        VectorSystem.from_vectors([])


def test_count_sign_solutions_h24():
    assert count_sign_solutions(H24, (0, 0)) == 4
    # independent brute force
    brute = sum(
        1
        for x in product((1, -1), repeat=4)
        if sum(x) == 0 and x[0] + x[1] - x[2] - x[3] == 0
    )
    assert brute == 4


def test_count_sign_solutions_parity():
    ones = ExactMatrix.from_rows([[1, 1, 1, 1, 1]])
    assert count_sign_solutions(ones, (0,)) == 0


def test_count_sign_solutions_no_constraints():
    empty = ExactMatrix.from_rows([], cols=6)
    assert count_sign_solutions(empty) == 64


def test_count_sign_solutions_kernel_bound():
    rng = random.Random(31)
    for _ in range(60):
        rows = rng.randint(1, 3)
        cols = rng.randint(rows, 10)
        m = ExactMatrix.from_rows(
            [[rng.randint(-2, 2) for _ in range(cols)] for _ in range(rows)]
        )
        assert count_sign_solutions(m) <= 1 << (cols - rank(m))


def test_count_sign_solutions_matches_naive():
    rng = random.Random(41)
    for _ in range(30):
        rows = rng.randint(1, 3)
        cols = rng.randint(1, 8)
        m = ExactMatrix.from_rows(
            [[rng.randint(-2, 2) for _ in range(cols)] for _ in range(rows)]
        )
        b = tuple(rng.randint(-2, 2) for _ in range(rows))
        brute = sum(
            1
            for x in product((1, -1), repeat=cols)
            if all(
                sum(m.entries[i][j] * x[j] for j in range(cols)) == b[i]
                for i in range(rows)
            )
        )
        assert count_sign_solutions(m, b) == brute


def test_combinatorial_dimension_all_ones_line():
    count, d_pm = combinatorial_dimension(ExactMatrix.from_rows([[1, 1, 1, 1, 1]]))
    assert count == 2
    assert d_pm == 1.0


def test_combinatorial_dimension_full_space():
    count, d_pm = combinatorial_dimension(ExactMatrix.identity(5))
    assert count == 32
    assert d_pm == 5.0


def test_combinatorial_dimension_empty_intersection():
    count, d_pm = combinatorial_dimension(ExactMatrix.from_rows([[1, 0]]))
    assert count == 0
    assert d_pm is None


def test_combinatorial_dimension_never_exceeds_rank_bound():
    rng = random.Random(61)
    for _ in range(50):
        r = rng.randint(1, 5)
        n = rng.randint(r, 10)
        m = ExactMatrix.from_rows(
            [[rng.choice((1, -1)) for _ in range(n)] for _ in range(r)]
        )
        count, _ = combinatorial_dimension(m)
        assert count <= 1 << rank(m)


def test_combinatorial_dimension_matches_naive_on_small_spaces():
    rng = random.Random(71)
    for _ in range(20):
        r = rng.randint(1, 3)
        n = rng.randint(r, 7)
        m = ExactMatrix.from_rows(
            [[rng.randint(-1, 1) for _ in range(n)] for _ in range(r)]
        )
        count, _ = combinatorial_dimension(m)
        # naive: solve membership for every sign vector by rank comparison
        brute = 0
        for x in product((1, -1), repeat=n):
            stacked = ExactMatrix.from_rows(list(m.entries) + [list(x)])
            if rank(stacked) == rank(m):
                brute += 1
        assert count == brute


def test_levy_radius_zero_equals_atom_max():
    rng = random.Random(81)
    for _ in range(20):
        d = rng.randint(1, 2)
        n = rng.randint(1, 8)
        sys = VectorSystem.from_vectors(
            [tuple(rng.randint(-2, 2) for _ in range(d)) for _ in range(n)]
        )
        assert levy_lower_bound(sys, 0) == atom_max(sys)


def test_levy_covers_support_at_small_radius():
    sys = VectorSystem.from_vectors([(1,), (1,)])
    assert levy_lower_bound(sys, 2) == 1


def test_levy_huge_radius():
    sys = VectorSystem.from_vectors([(3, 1), (1, -2), (0, 5)])
    assert levy_lower_bound(sys, 100) == 1


def test_levy_midpoint_policy_not_worse():
    sys = VectorSystem.from_vectors([(1,), (3,)])
    base = levy_lower_bound(sys, 1)
    better = levy_lower_bound(sys, 1, centers="atoms+midpoints")
    assert better >= base

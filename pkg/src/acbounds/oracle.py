"""Exact brute-force ground truth for anti-concentration quantities.

Atom distributions of signed vector sums, sign-solution counts of linear
systems, and lattice-point counts of subspaces are all computed exactly
(rational masses, integer counts) so that every closed-form bound in the
package can be tested against a certified oracle value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .exactmat import BudgetExceededError, ExactMatrix, rref_fraction
from .system import VectorSystem

ATOM_CAP_DEFAULT = 26
SOLUTION_CAP_DEFAULT = 40
COMBDIM_RANK_CAP_DEFAULT = 20


def signed_sum_counts(vectors) -> dict:
    """Count, for every lattice point u, the sign vectors with sum(eps_i v_i) = u.

    Gray-code iteration: each of the 2^h sign assignments is visited once and
    the running sum is updated incrementally in O(d).
    """
    vectors = [tuple(v) for v in vectors]
    h = len(vectors)
    if h == 0:
        return {(): 1}
    d = len(vectors[0])
    signs = [1] * h
    cur = [sum(v[c] for v in vectors) for c in range(d)]
    counts = {}
    key = tuple(cur)
    counts[key] = counts.get(key, 0) + 1
    for g in range(1, 1 << h):
        i = (g & -g).bit_length() - 1
        signs[i] = -signs[i]
        vi = vectors[i]
        for c in range(d):
            cur[c] += 2 * signs[i] * vi[c]
        key = tuple(cur)
        counts[key] = counts.get(key, 0) + 1
    return counts


@dataclass(frozen=True)
class AtomTable:
    """Exact distribution of a signed vector sum: lattice point -> probability."""

    dimension: int
    probs: dict
    total_mass: Fraction

    def max_atom(self) -> Fraction:
        return max(self.probs.values())

    def argmax(self):
        best = self.max_atom()
        return min(p for p, q in self.probs.items() if q == best)


def atom_distribution(system: VectorSystem, cap: int = ATOM_CAP_DEFAULT) -> AtomTable:
    """Exact distribution of sum(eps_i a_i) over independent Rademacher signs.

    Meet in the middle: the two index halves are enumerated separately
    (2^ceil(n/2) + 2^floor(n/2) sign vectors) and joined through a hash map
    on partial sums, which collapses whenever the sum lattice is small.
    """
    n = system.n
    if n > cap:
        raise BudgetExceededError(f"n={n} exceeds enumeration cap {cap}")
    half = (n + 1) // 2
    left = signed_sum_counts(system.vectors[:half])
    right = signed_sum_counts(system.vectors[half:])
    d = system.dimension
    counts = {}
    if n == half:
        counts = left
    else:
        for pl, cl in left.items():
            for pr, cr in right.items():
                key = tuple(pl[c] + pr[c] for c in range(d))
                counts[key] = counts.get(key, 0) + cl * cr
    denom = 1 << n
    probs = {p: Fraction(c, denom) for p, c in counts.items()}
    total = sum(probs.values())
    if total != 1:
        raise AssertionError("atom masses must sum to 1 exactly")
    return AtomTable(d, probs, total)


def atom_max(system: VectorSystem, cap: int = ATOM_CAP_DEFAULT) -> Fraction:
    """sup over u of Pr[sum(eps_i a_i) = u], exactly."""
    return atom_distribution(system, cap=cap).max_atom()


def _ball_mass(probs, center, radius_sq: Fraction) -> Fraction:
    mass = Fraction(0)
    for p, q in probs.items():
        dist_sq = sum((Fraction(x) - c) ** 2 for x, c in zip(p, center))
        if dist_sq <= radius_sq:
            mass += q
    return mass


def levy_lower_bound(
    system: VectorSystem,
    radius,
    centers: str = "atoms",
    cap: int = ATOM_CAP_DEFAULT,
) -> Fraction:
    """Certified lower bound on the Levy concentration of the signed sum.

    Maximizes the mass of a radius ball over a finite center policy: the
    achieved atoms themselves, optionally extended by midpoints of atom
    pairs.  The true Levy function takes a sup over all real centers, so the
    returned value is a lower bound; every bound under test is an upper
    bound on the Levy function, which a lower bound can falsify.
    """
    if centers not in ("atoms", "atoms+midpoints"):
        raise ValueError("centers must be 'atoms' or 'atoms+midpoints'")
    table = atom_distribution(system, cap=cap)
    radius_sq = Fraction(radius) ** 2
    points = list(table.probs)
    candidates = [tuple(Fraction(x) for x in p) for p in points]
    if centers == "atoms+midpoints":
        for i, p in enumerate(points):
            for q in points[i + 1 :]:
                candidates.append(tuple((Fraction(a) + b) / 2 for a, b in zip(p, q)))
    return max(_ball_mass(table.probs, c, radius_sq) for c in candidates)


def count_sign_solutions_columns(columns, b, cap: int = SOLUTION_CAP_DEFAULT) -> int:
    """Exact |{x in {+-1}^n : sum x_j col_j = b}| for integer columns."""
    n = len(columns)
    if n > cap:
        raise BudgetExceededError(f"n={n} exceeds enumeration cap {cap}")
    if n == 0:
        return 1 if all(v == 0 for v in b) else 0
    d = len(columns[0])
    b = tuple(b)
    if len(b) != d:
        raise ValueError("target vector length mismatch")
    half = (n + 1) // 2
    left = signed_sum_counts(columns[:half])
    right = signed_sum_counts(columns[half:])
    if n == half:
        return left.get(b, 0)
    total = 0
    for pl, cl in left.items():
        need = tuple(b[c] - pl[c] for c in range(d))
        cr = right.get(need)
        if cr:
            total += cl * cr
    return total


def count_sign_solutions(a: ExactMatrix, b=None, cap: int = SOLUTION_CAP_DEFAULT) -> int:
    """Exact number of x in {+-1}^cols with A x = b (b defaults to 0).

    A matrix with zero rows imposes no constraints and yields 2^cols.
    """
    if a.rows == 0:
        if a.cols > cap:
            raise BudgetExceededError(f"n={a.cols} exceeds enumeration cap {cap}")
        return 1 << a.cols
    if b is None:
        b = (0,) * a.rows
    columns = [a.column(j) for j in range(a.cols)]
    return count_sign_solutions_columns(columns, tuple(b), cap=cap)


def combinatorial_dimension(
    spanning: ExactMatrix, cap: int = COMBDIM_RANK_CAP_DEFAULT
):
    """Count the sign vectors inside the row space of `spanning`.

    Pivot method: reduce the spanning rows to a basis in reduced echelon
    form; a vector of the space is determined by its values on the pivot
    coordinates, so the 2^rank sign assignments of the pivots enumerate
    every candidate, each extended uniquely and tested for membership in
    {+-1}^n.  Returns (count, log2(count)); the log is None when count = 0.
    """
    basis, pivots = rref_fraction(spanning.entries)
    r = len(basis)
    if r > cap:
        raise BudgetExceededError(f"rank {r} exceeds enumeration cap {cap}")
    if r == 0:
        return 0, None
    n = spanning.cols
    denom = 1
    for row in basis:
        for x in row:
            denom = denom * x.denominator // math.gcd(denom, x.denominator)
    # Integerized basis: candidate sums must hit +-denom in every coordinate.
    int_basis = [[int(x * denom) for x in row] for row in basis]
    signs = [1] * r
    cur = [sum(int_basis[i][j] for i in range(r)) for j in range(n)]
    count = 0
    if all(v == denom or v == -denom for v in cur):
        count += 1
    for g in range(1, 1 << r):
        i = (g & -g).bit_length() - 1
        signs[i] = -signs[i]
        bi = int_basis[i]
        flip = 2 * signs[i]
        for j in range(n):
            cur[j] += flip * bi[j]
        if all(v == denom or v == -denom for v in cur):
            count += 1
    d_pm = math.log2(count) if count > 0 else None
    return count, d_pm

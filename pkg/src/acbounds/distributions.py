"""Exact lattice distributions and the replication-trick inequalities.

Distributions are finite rational measures on Z^d.  Convolution, reflection
(symmetrization), and convolution powers are computed exactly, so the
replication inequalities can be decided by exact rational comparison: a
claim  lhs <= prod m_i^(1/a_i)  is settled by raising both sides to the
lcm of the a_i, which keeps everything in integer arithmetic.
"""

from __future__ import annotations

import json
import math
from fractions import Fraction


class LatticeDistribution:
    """Finitely supported probability distribution on Z^d with exact masses."""

    __slots__ = ("dimension", "atoms")

    def __init__(self, dimension, atoms):
        self.dimension = int(dimension)
        cleaned = {}
        for point, mass in dict(atoms).items():
            point = tuple(int(x) for x in point)
            if len(point) != self.dimension:
                raise ValueError("atom dimension mismatch")
            mass = Fraction(mass)
            if mass < 0:
                raise ValueError("masses must be nonnegative")
            if mass:
                cleaned[point] = cleaned.get(point, Fraction(0)) + mass
        if sum(cleaned.values(), Fraction(0)) != 1:
            raise ValueError("masses must sum to 1 exactly")
        self.atoms = cleaned

    @staticmethod
    def delta(point) -> "LatticeDistribution":
        point = tuple(int(x) for x in point)
        return LatticeDistribution(len(point), {point: Fraction(1)})

    @staticmethod
    def rademacher() -> "LatticeDistribution":
        return LatticeDistribution(1, {(1,): Fraction(1, 2), (-1,): Fraction(1, 2)})

    @staticmethod
    def from_json(obj) -> "LatticeDistribution":
        if isinstance(obj, str):
            obj = json.loads(obj)
        atoms = {tuple(a["point"]): Fraction(a["mass"]) for a in obj["atoms"]}
        return LatticeDistribution(obj["d"], atoms)

    def to_json(self) -> dict:
        return {
            "d": self.dimension,
            "atoms": [
                {"point": list(p), "mass": f"{m.numerator}/{m.denominator}"}
                for p, m in sorted(self.atoms.items())
            ],
        }

    def mass_at(self, point) -> Fraction:
        return self.atoms.get(tuple(point), Fraction(0))

    def max_atom(self) -> Fraction:
        return max(self.atoms.values())

    def support(self):
        return sorted(self.atoms)

    def reflect(self) -> "LatticeDistribution":
        return LatticeDistribution(
            self.dimension, {tuple(-x for x in p): m for p, m in self.atoms.items()}
        )

    def is_origin_symmetric(self) -> bool:
        return all(self.atoms.get(tuple(-x for x in p)) == m for p, m in self.atoms.items())

    def ball_mass(self, center, radius) -> Fraction:
        """Exact mass of the closed Euclidean ball of the given radius."""
        radius_sq = Fraction(radius) ** 2
        center = tuple(Fraction(c) for c in center)
        if all(c.denominator == 1 for c in center):
            # Integer center: squared distances stay integral.
            ic = tuple(int(c) for c in center)
            total = Fraction(0)
            for p, m in self.atoms.items():
                if sum((x - c) ** 2 for x, c in zip(p, ic)) <= radius_sq:
                    total += m
            return total
        total = Fraction(0)
        for p, m in self.atoms.items():
            if sum((Fraction(x) - c) ** 2 for x, c in zip(p, center)) <= radius_sq:
                total += m
        return total

    def best_ball_mass(self, radius) -> Fraction:
        """Max ball mass over atom centers: a certified Levy lower bound."""
        if Fraction(radius) == 0:
            return self.max_atom()
        return max(self.ball_mass(p, radius) for p in self.atoms)

    def __eq__(self, other):
        return (
            isinstance(other, LatticeDistribution)
            and self.dimension == other.dimension
            and self.atoms == other.atoms
        )

    def __repr__(self):
        return f"LatticeDistribution(d={self.dimension}, support={len(self.atoms)})"


def _int_weights(p: LatticeDistribution):
    """Masses as integer weights over a common denominator (exact)."""
    denom = 1
    for m in p.atoms.values():
        denom = denom * m.denominator // math.gcd(denom, m.denominator)
    return {pt: int(m * denom) for pt, m in p.atoms.items()}, denom


def _conv_int(wa: dict, wb: dict) -> dict:
    out = {}
    get = out.get
    for a, ma in wa.items():
        for b, mb in wb.items():
            key = tuple(x + y for x, y in zip(a, b))
            out[key] = get(key, 0) + ma * mb
    return out


def convolve(p: LatticeDistribution, q: LatticeDistribution) -> LatticeDistribution:
    """Exact distribution of the sum of independent draws from p and q.

    Runs on integer weights over a common denominator; Fractions are only
    rebuilt once at the end, which keeps large convolutions cheap.
    """
    if p.dimension != q.dimension:
        raise ValueError("dimension mismatch")
    wa, da = _int_weights(p)
    wb, db = _int_weights(q)
    out = _conv_int(wa, wb)
    denom = da * db
    return LatticeDistribution(p.dimension, {k: Fraction(v, denom) for k, v in out.items()})


def symmetrize(p: LatticeDistribution) -> LatticeDistribution:
    """Distribution of X - X' for an independent copy X'; origin-symmetric."""
    return convolve(p, p.reflect())


def self_convolve(p: LatticeDistribution, m: int) -> LatticeDistribution:
    """m-fold convolution power via binary exponentiation on integer weights."""
    if m < 1:
        raise ValueError("m must be >= 1")
    base, base_denom = _int_weights(p)
    power = m
    result = None
    result_denom = 1
    while power:
        if power & 1:
            if result is None:
                result, result_denom = dict(base), base_denom
            else:
                result = _conv_int(result, base)
                result_denom *= base_denom
        power >>= 1
        if power:
            base = _conv_int(base, base)
            base_denom *= base_denom
    return LatticeDistribution(
        p.dimension, {k: Fraction(v, result_denom) for k, v in result.items()}
    )


def _validate_tuple(dists, tup, divisor):
    if len(tup) != len(dists):
        raise ValueError("tuple length must equal the number of distributions")
    total = Fraction(0)
    for a in tup:
        if a % divisor != 0 or a <= 0:
            raise ValueError(f"tuple entries must be positive multiples of {divisor}")
        total += Fraction(1, a)
    if total != 1:
        raise ValueError("tuple reciprocals must sum to 1 exactly")


def _geometric_mean_upper(masses, tup) -> float:
    """Float upper bound on prod masses[i]^(1/tup[i]) (upward-rounded)."""
    value = 1.0
    for m, a in zip(masses, tup):
        value *= float(m) ** (1.0 / a)
    for _ in range(8):
        value = math.nextafter(value, math.inf)
    return min(value, 1.0) if all(m <= 1 for m in masses) else value


def _exact_product_dominates(lhs: Fraction, masses, tup) -> bool:
    """Decide lhs <= prod masses[i]^(1/tup[i]) exactly via lcm powering."""
    lcm = 1
    for a in tup:
        lcm = lcm * a // math.gcd(lcm, a)
    left = lhs**lcm
    right = Fraction(1)
    for m, a in zip(masses, tup):
        right *= Fraction(m) ** (lcm // a)
    return left <= right


def replication_atom_check(dists, tup, v, variant: str = "symmetrized"):
    """Check one instance of the replication inequality for point masses.

    variant "symmetrized": tuple entries in 4N; each factor is the mass at 0
    of the (a_i/2)-fold convolution power of the symmetrized i-th summand.
    variant "origin-symmetric": tuple entries in 2N, all inputs must be
    origin-symmetric, and the factor uses the a_i-fold power of the summand
    itself.  Returns (lhs, rhs, holds): lhs exact, rhs an upward-rounded
    float of the product, holds decided by exact rational comparison.
    """
    if variant == "symmetrized":
        divisor = 4
    elif variant == "origin-symmetric":
        divisor = 2
    else:
        raise ValueError("variant must be 'symmetrized' or 'origin-symmetric'")
    dists = list(dists)
    if not dists:
        raise ValueError("need at least one distribution")
    d = dists[0].dimension
    if any(p.dimension != d for p in dists):
        raise ValueError("dimension mismatch")
    _validate_tuple(dists, tup, divisor)
    if variant == "origin-symmetric" and not all(p.is_origin_symmetric() for p in dists):
        raise ValueError("origin-symmetric variant needs origin-symmetric inputs")

    total = dists[0]
    for p in dists[1:]:
        total = convolve(total, p)
    lhs = total.mass_at(v)

    masses = []
    for p, a in zip(dists, tup):
        if variant == "symmetrized":
            masses.append(self_convolve(symmetrize(p), a // 2).mass_at((0,) * d))
        else:
            masses.append(self_convolve(p, a).mass_at((0,) * d))
    rhs = _geometric_mean_upper(masses, tup)
    holds = _exact_product_dominates(lhs, masses, tup)
    return lhs, rhs, holds


def replication_sbp_check(dists, tup, delta, center, variant: str = "symmetrized"):
    """Check one small-ball instance of the replication inequality.

    lhs is the exact mass of the radius-delta ball at `center` under the full
    convolution (a lower bound on its Levy function); rhs is 2^d times the
    geometric mean of best-center ball masses at radius 4*delta of the
    replicated factors.  holds is decided exactly.
    """
    if variant == "symmetrized":
        divisor = 4
    elif variant == "origin-symmetric":
        divisor = 2
    else:
        raise ValueError("variant must be 'symmetrized' or 'origin-symmetric'")
    dists = list(dists)
    if not dists:
        raise ValueError("need at least one distribution")
    d = dists[0].dimension
    if any(p.dimension != d for p in dists):
        raise ValueError("dimension mismatch")
    _validate_tuple(dists, tup, divisor)
    if variant == "origin-symmetric" and not all(p.is_origin_symmetric() for p in dists):
        raise ValueError("origin-symmetric variant needs origin-symmetric inputs")

    total = dists[0]
    for p in dists[1:]:
        total = convolve(total, p)
    lhs = total.ball_mass(center, delta)

    big_radius = 4 * Fraction(delta)
    masses = []
    for p, a in zip(dists, tup):
        if variant == "symmetrized":
            rep = self_convolve(symmetrize(p), a // 2)
        else:
            rep = self_convolve(p, a)
        masses.append(rep.best_ball_mass(big_radius))
    prefactor = 1 << d
    rhs = prefactor * _geometric_mean_upper(masses, tup)
    holds = _exact_product_dominates(lhs / prefactor, masses, tup)
    return lhs, rhs, holds

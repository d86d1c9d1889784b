"""Exact arithmetic for the rank-2 polarization lattice.

The lattice is Z<g', g''> with g' = (2,1) and g'' = (1,2) in standard
coordinates, i.e. the image of Z^2 under the Gram matrix M = [[2,1],[1,2]].
All weights in the theta/counting layers are driven by the positive definite
norm form N(n1,n2) = n1^2 + n1*n2 + n2^2, so finite truncations are always
norm balls, never coordinate boxes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

Rational = Fraction
Vec2 = tuple[Fraction, Fraction]

# Gram matrix of the polarization and its inverse (exact).
GRAM = ((2, 1), (1, 2))
GRAM_INV = (
    (Fraction(2, 3), Fraction(-1, 3)),
    (Fraction(-1, 3), Fraction(2, 3)),
)


@dataclass(frozen=True, order=True)
class LatticeVector:
    """Lattice element n1*g' + n2*g''; `std` gives standard coordinates."""

    n1: int
    n2: int

    @property
    def std(self) -> tuple[int, int]:
        return (2 * self.n1 + self.n2, self.n1 + 2 * self.n2)

    @property
    def norm(self) -> int:
        """Positive definite norm form N(n) = n1^2 + n1 n2 + n2^2."""
        return self.n1 * self.n1 + self.n1 * self.n2 + self.n2 * self.n2

    def __add__(self, other: "LatticeVector") -> "LatticeVector":
        return LatticeVector(self.n1 + other.n1, self.n2 + other.n2)

    def __sub__(self, other: "LatticeVector") -> "LatticeVector":
        return LatticeVector(self.n1 - other.n1, self.n2 - other.n2)

    def __neg__(self) -> "LatticeVector":
        return LatticeVector(-self.n1, -self.n2)

    def __mul__(self, k: int) -> "LatticeVector":
        return LatticeVector(self.n1 * k, self.n2 * k)

    __rmul__ = __mul__


GAMMA_P = LatticeVector(1, 0)
GAMMA_PP = LatticeVector(0, 1)


class MomentPoint(NamedTuple):
    """Moment coordinates (xi1, xi2, eta), exact rationals."""

    xi1: Fraction
    xi2: Fraction
    eta: Fraction


def from_std(v: Vec2) -> LatticeVector:
    """Invert the basis map; raises if `v` is not a lattice point."""
    a, b = Fraction(v[0]), Fraction(v[1])
    n1 = (2 * a - b) / 3
    n2 = (2 * b - a) / 3
    if n1.denominator != 1 or n2.denominator != 1:
        raise ValueError(f"{v} is not in the lattice")
    return LatticeVector(int(n1), int(n2))


def lambda_map(v: Vec2) -> Vec2:
    """Apply the inverse Gram matrix to a standard-coordinate vector.

    On lattice vectors this returns the (n1, n2) basis coordinates.
    """
    a, b = Fraction(v[0]), Fraction(v[1])
    return (
        GRAM_INV[0][0] * a + GRAM_INV[0][1] * b,
        GRAM_INV[1][0] * a + GRAM_INV[1][1] * b,
    )


def kappa(v: Vec2) -> Fraction:
    """Quadratic weight -1/2 <v, lambda(v)> of a standard-coordinate vector.

    For a lattice vector n1*g' + n2*g'' this equals -(n1^2 + n1 n2 + n2^2).
    """
    a, b = Fraction(v[0]), Fraction(v[1])
    la = lambda_map((a, b))
    return -(a * la[0] + b * la[1]) / 2


def norm_form(w1: Fraction, w2: Fraction) -> Fraction:
    """N(w) = w1^2 + w1 w2 + w2^2 on (possibly rational) basis coordinates."""
    return w1 * w1 + w1 * w2 + w2 * w2


def coset_reps(level: int) -> list[LatticeVector]:
    """The level**2 representatives e1*g' + e2*g'', 0 <= e1, e2 < level.

    Row-major order with e1 varying fastest: (0,0), (1,0), ..., (0,1), ...
    """
    if level < 1:
        raise ValueError("level must be a positive integer")
    return [LatticeVector(e1, e2) for e2 in range(level) for e1 in range(level)]


def gamma_act_moment(g: LatticeVector, p: MomentPoint) -> MomentPoint:
    """Translate a moment point by a lattice vector.

    The action is (xi, eta) -> (xi - g_std, eta - kappa(g) - <xi, lambda(g)>);
    it is an exact group action and preserves membership in the moment body
    eta >= trop(xi).
    """
    gs = g.std
    xi1 = Fraction(p.xi1) - gs[0]
    xi2 = Fraction(p.xi2) - gs[1]
    eta = Fraction(p.eta) + g.norm - (Fraction(p.xi1) * g.n1 + Fraction(p.xi2) * g.n2)
    return MomentPoint(xi1, xi2, eta)


def enumerate_norm_ball(bound: Rational | int) -> list[LatticeVector]:
    """All lattice vectors with N(n) <= bound, each exactly once.

    N(n) >= (3/4) max(n1^2, n2^2), so a box of half-width ceil(sqrt(4B/3))
    is guaranteed to contain the ball.
    """
    bound = Fraction(bound)
    if bound < 0:
        raise ValueError("bound must be nonnegative")
    half = math.isqrt((4 * bound.numerator) // (3 * bound.denominator) + 1) + 1
    out = []
    for n1 in range(-half, half + 1):
        for n2 in range(-half, half + 1):
            if n1 * n1 + n1 * n2 + n2 * n2 <= bound:
                out.append(LatticeVector(n1, n2))
    return out


def enumerate_shifted_ball(shift: Vec2, bound: Rational) -> list[LatticeVector]:
    """All integer n with N(n + shift) <= bound (shift in basis coordinates)."""
    bound = Fraction(bound)
    if bound < 0:
        return []
    s1, s2 = Fraction(shift[0]), Fraction(shift[1])
    half = math.isqrt((4 * bound.numerator) // (3 * bound.denominator) + 1) + 1
    lo1 = math.floor(-s1 - half)
    hi1 = math.ceil(-s1 + half)
    lo2 = math.floor(-s2 - half)
    hi2 = math.ceil(-s2 + half)
    out = []
    for n1 in range(lo1, hi1 + 1):
        for n2 in range(lo2, hi2 + 1):
            if norm_form(n1 + s1, n2 + s2) <= bound:
                out.append(LatticeVector(n1, n2))
    return out


def min_norm_in_coset(residue: tuple[int, int], modulus: int) -> int:
    """Minimal N over the coset residue + modulus*Z^2.

    Scans a box around the reduced representative and certifies the minimum
    by checking that widening the box does not improve it.
    """
    r1 = residue[0] % modulus
    r2 = residue[1] % modulus
    best = None
    for n1 in range(-3, 3):
        for n2 in range(-3, 3):
            v = LatticeVector(r1 + modulus * n1, r2 + modulus * n2)
            if best is None or v.norm < best:
                best = v.norm
    # Outside the scanned box N >= (3/4)(2*modulus)^2 = 3*modulus^2 >= best.
    assert best is not None and best <= 3 * modulus * modulus
    return best

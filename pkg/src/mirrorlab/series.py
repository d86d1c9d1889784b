"""Exact formal series in the area parameter tau, and theta sections.

A TauSeries is a finite sum of c * tau^e with rational c and e, together
with an explicit cutoff: exponents above the cutoff are unknown, not zero.
Theta sections are stored as Laurent data: a map from integer x-exponent
(in the basis where the lattice pairing is integral) to a TauSeries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, NamedTuple

from .lattice import (
    LatticeVector,
    Rational,
    coset_reps,
    enumerate_shifted_ball,
    min_norm_in_coset,
    norm_form,
)


@dataclass(frozen=True)
class TauSeries:
    """Finite tau-polynomial with rational exponents and a knowledge cutoff."""

    terms: tuple[tuple[Fraction, Fraction], ...]  # (exponent, coefficient)
    cutoff: Fraction

    @staticmethod
    def from_terms(pairs: Iterable[tuple[Rational, Rational]], cutoff: Rational) -> "TauSeries":
        cutoff = Fraction(cutoff)
        acc: dict[Fraction, Fraction] = {}
        for e, c in pairs:
            e, c = Fraction(e), Fraction(c)
            if e > cutoff:
                continue
            acc[e] = acc.get(e, Fraction(0)) + c
        terms = tuple(sorted((e, c) for e, c in acc.items() if c != 0))
        return TauSeries(terms, cutoff)

    @staticmethod
    def zero(cutoff: Rational) -> "TauSeries":
        return TauSeries((), Fraction(cutoff))

    @staticmethod
    def one(cutoff: Rational) -> "TauSeries":
        return TauSeries.from_terms([(0, 1)], cutoff)

    def __add__(self, other: "TauSeries") -> "TauSeries":
        cutoff = min(self.cutoff, other.cutoff)
        return TauSeries.from_terms(list(self.terms) + list(other.terms), cutoff)

    def __sub__(self, other: "TauSeries") -> "TauSeries":
        return self + other.scale(-1)

    def __mul__(self, other: "TauSeries") -> "TauSeries":
        # The unknown tail of either factor contaminates products above the
        # smaller cutoff, so knowledge does not extend past min(cutoffs).
        cutoff = min(self.cutoff, other.cutoff)
        pairs = []
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                e = e1 + e2
                if e <= cutoff:
                    pairs.append((e, c1 * c2))
        return TauSeries.from_terms(pairs, cutoff)

    def scale(self, c: Rational) -> "TauSeries":
        c = Fraction(c)
        if c == 0:
            return TauSeries((), self.cutoff)
        return TauSeries(tuple((e, k * c) for e, k in self.terms), self.cutoff)

    def shift(self, delta: Rational) -> "TauSeries":
        """Multiply by tau^delta (moves the cutoff along with the terms)."""
        delta = Fraction(delta)
        return TauSeries(tuple((e + delta, c) for e, c in self.terms), self.cutoff + delta)

    def truncate(self, cutoff: Rational) -> "TauSeries":
        cutoff = Fraction(cutoff)
        if cutoff >= self.cutoff:
            return self
        return TauSeries(tuple((e, c) for e, c in self.terms if e <= cutoff), cutoff)

    def coefficient(self, e: Rational) -> Fraction:
        e = Fraction(e)
        for ee, c in self.terms:
            if ee == e:
                return c
        return Fraction(0)

    def leading(self) -> tuple[Fraction, Fraction] | None:
        return self.terms[0] if self.terms else None

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def exponents(self) -> tuple[Fraction, ...]:
        return tuple(e for e, _ in self.terms)

    def evaluate(self, tau: float) -> float:
        return float(sum(float(c) * tau ** float(e) for e, c in self.terms))

    def exp(self) -> "TauSeries":
        """exp of a series with positive integer exponents, truncated.

        Uses the recursion (exp f)' = f' exp f on integer degrees.
        """
        if any(e.denominator != 1 or e <= 0 for e, _ in self.terms):
            raise ValueError("exp requires positive integer exponents")
        n = math.floor(self.cutoff)
        f = [Fraction(0)] * (n + 1)
        for e, c in self.terms:
            f[int(e)] = c
        g = [Fraction(0)] * (n + 1)
        g[0] = Fraction(1)
        for k in range(1, n + 1):
            g[k] = sum(Fraction(j) * f[j] * g[k - j] for j in range(1, k + 1)) / k
        return TauSeries.from_terms([(Fraction(k), g[k]) for k in range(n + 1)], self.cutoff)

    def to_json(self) -> dict:
        return {
            "cutoff": str(self.cutoff),
            "terms": [[str(e), str(c)] for e, c in self.terms],
        }

    @staticmethod
    def from_json(obj: dict) -> "TauSeries":
        return TauSeries.from_terms(
            [(Fraction(e), Fraction(c)) for e, c in obj["terms"]], Fraction(obj["cutoff"])
        )

    def __str__(self) -> str:
        if not self.terms:
            return f"0 (+O(tau^{self.cutoff}))"
        body = " + ".join(f"{c}*tau^{e}" for e, c in self.terms)
        return f"{body} (+O(tau^{self.cutoff}))"


@dataclass(frozen=True)
class LaurentSection:
    """A section of a level-`level` theta bundle as Laurent data in x.

    `coeffs` maps an integer x-exponent pair to the tau-series multiplying
    that monomial; all member series share the section cutoff.  For the
    basis section of representative e, the key lattice is -(level*n + e).
    """

    level: int
    cutoff: Fraction
    coeffs: dict[tuple[int, int], TauSeries] = field(compare=False)
    theta_rep: LatticeVector | None = None

    def keys_sorted(self) -> list[tuple[int, int]]:
        return sorted(self.coeffs)

    def to_json(self) -> dict:
        return {
            "level": self.level,
            "cutoff": str(self.cutoff),
            "coeffs": [
                {"x_exp": list(k), "series": self.coeffs[k].to_json()}
                for k in self.keys_sorted()
            ],
        }


class NumericValue(NamedTuple):
    """A truncated numeric sum together with a bound on the dropped tail."""

    value: float
    tail_bound: float


def theta_section(e: LatticeVector, level: int, cutoff: Rational) -> LaurentSection:
    """The basis section of representative e at the given level.

    Terms are tau^(level * N(n + e/level)) x^(-(level*n + e)) over all lattice
    n; every term with tau-exponent <= cutoff is included.
    """
    if level < 1:
        raise ValueError("level must be positive")
    if not (0 <= e.n1 < level and 0 <= e.n2 < level):
        raise ValueError(f"{e} is not a level-{level} representative")
    cutoff = Fraction(cutoff)
    shift = (Fraction(e.n1, level), Fraction(e.n2, level))
    coeffs: dict[tuple[int, int], TauSeries] = {}
    for n in enumerate_shifted_ball(shift, cutoff / level):
        exp = level * norm_form(n.n1 + shift[0], n.n2 + shift[1])
        key = (-(level * n.n1 + e.n1), -(level * n.n2 + e.n2))
        coeffs[key] = TauSeries.from_terms([(exp, 1)], cutoff)
    return LaurentSection(level, cutoff, coeffs, theta_rep=e)


def section_mul(s1: LaurentSection, s2: LaurentSection) -> LaurentSection:
    """Product section; level adds, cutoff is the minimum of the factors'."""
    cutoff = min(s1.cutoff, s2.cutoff)
    acc: dict[tuple[int, int], TauSeries] = {}
    for k1, t1 in s1.coeffs.items():
        for k2, t2 in s2.coeffs.items():
            prod = t1 * t2
            if prod.is_zero:
                continue
            key = (k1[0] + k2[0], k1[1] + k2[1])
            acc[key] = acc[key] + prod if key in acc else prod.truncate(cutoff)
    return LaurentSection(s1.level + s2.level, cutoff, acc)


def section_mul_decompose(
    s1: LaurentSection, s2: LaurentSection, cutoff: Rational | None = None
) -> dict[LatticeVector, TauSeries]:
    """Structure constants C_e with  s1*s2 = sum_e C_e * (basis section e).

    Works by matching the product against the x-exponent lattices of the
    level-(l1+l2) basis sections: the key class -(l*n + e) determines e and
    the basis tau-exponent N(l*n + e)/l to divide out.  Every x-exponent
    class must agree on the overlap of its validity ranges.
    """
    level = s1.level + s2.level
    prod = section_mul(s1, s2)
    best: dict[LatticeVector, TauSeries] = {}
    for key, ts in prod.coeffs.items():
        e1 = (-key[0]) % level
        e2 = (-key[1]) % level
        rep = LatticeVector(e1, e2)
        # x-exponent class membership is a partition of Z^2; a key outside
        # every basis support would signal a corrupted product.
        if ((-key[0]) - e1) % level or ((-key[1]) - e2) % level:
            raise AssertionError(f"x-exponent {key} outside the level-{level} lattice")
        base_exp = Fraction(norm_form(Fraction(-key[0]), Fraction(-key[1])), level)
        cand = ts.shift(-base_exp).truncate(prod.cutoff - base_exp)
        # Sanity: structure-constant exponents have denominators dividing
        # level * l1 * l2.
        scale = level * s1.level * s2.level
        assert all(scale % e.denominator == 0 for e, _ in cand.terms)
        if rep not in best:
            best[rep] = cand
        else:
            cur = best[rep]
            common = min(cur.cutoff, cand.cutoff)
            if cur.truncate(common) != cand.truncate(common):
                raise AssertionError(
                    f"inconsistent structure constant for representative {rep}"
                )
            if cand.cutoff > cur.cutoff:
                best[rep] = cand
    # Representatives whose minimal basis exponent exceeds the cutoff simply
    # do not appear in the truncated product; report them as zero series.
    for rep in coset_reps(level):
        if rep not in best:
            defect = Fraction(min_norm_in_coset((-rep.n1, -rep.n2), level), level)
            best[rep] = TauSeries.zero(prod.cutoff - defect)
    if cutoff is not None:
        best = {rep: ts.truncate(Fraction(cutoff)) for rep, ts in best.items()}
    return best


def recompose(
    constants: dict[LatticeVector, TauSeries], level: int, cutoff: Rational
) -> LaurentSection:
    """Rebuild sum_e C_e * (basis section e) up to the stated cutoff."""
    cutoff = Fraction(cutoff)
    acc: dict[tuple[int, int], TauSeries] = {}
    for rep, c in constants.items():
        base = theta_section(rep, level, cutoff)
        for key, ts in base.coeffs.items():
            prod = c.truncate(cutoff) * ts
            if prod.is_zero:
                continue
            acc[key] = acc[key] + prod if key in acc else prod
    return LaurentSection(level, cutoff, acc)


def decomposition_padding(level: int) -> Fraction:
    """Extra cutoff needed on the factors so every C_e is valid to the target.

    The class of representative e costs N_min(-e mod level)/level of validity.
    """
    worst = max(
        min_norm_in_coset((-rep.n1, -rep.n2), level) for rep in coset_reps(level)
    )
    return Fraction(worst, level)


def theta_product_constants(
    e1: LatticeVector, l1: int, e2: LatticeVector, l2: int, cutoff: Rational
) -> dict[LatticeVector, TauSeries]:
    """Decomposition of (basis e1, level l1) * (basis e2, level l2).

    Builds the factors with enough extra cutoff that every structure
    constant is complete up to `cutoff` exactly.
    """
    cutoff = Fraction(cutoff)
    pad = decomposition_padding(l1 + l2)
    s1 = theta_section(e1, l1, cutoff + pad)
    s2 = theta_section(e2, l2, cutoff + pad)
    return section_mul_decompose(s1, s2, cutoff)


def evaluate_numeric(
    s: LaurentSection, x_abs: tuple[float, float], tau: float
) -> NumericValue:
    """Evaluate a theta basis section at positive real |x| and tau in (0,1).

    Returns the truncated sum and a rigorous bound on the dropped tail,
    using the quadratic growth of the exponents.
    """
    if not (0 < tau < 1):
        raise ValueError("tau must lie in (0, 1)")
    if x_abs[0] <= 0 or x_abs[1] <= 0:
        raise ValueError("|x| must be positive")
    if s.theta_rep is None:
        raise ValueError("tail bound available only for theta basis sections")
    total = 0.0
    for key, ts in s.coeffs.items():
        mono = x_abs[0] ** key[0] * x_abs[1] ** key[1]
        total += mono * ts.evaluate(tau)
    # A term of shifted norm N(v) evaluates to tau^(l*(N(v - u) - N(u)))
    # after completing the square against the log-|x| linear part, where
    # u is the inverse Gram matrix applied to log_tau |x|.
    level = s.level
    log_tau = math.log(tau)
    xi = (math.log(x_abs[0]) / log_tau, math.log(x_abs[1]) / log_tau)
    u = ((2 * xi[0] - xi[1]) / 3.0, (2 * xi[1] - xi[0]) / 3.0)
    n_u = u[0] * u[0] + u[0] * u[1] + u[1] * u[1]
    tail = _dropped_tail(level, float(s.cutoff), tau, n_u)
    return NumericValue(total, tail)


def shifted_theta_value(
    level: int, w: tuple[float, float], tau: float, cutoff: float
) -> NumericValue:
    """sum over n of tau^(level * N(n + w)) for real shift w, plus tail bound."""
    if not (0 < tau < 1):
        raise ValueError("tau must lie in (0, 1)")
    bound = cutoff / level
    half = int(math.isqrt(int(4 * max(bound, 0.0) / 3) + 1)) + 2
    lo1 = math.floor(-w[0] - half)
    hi1 = math.ceil(-w[0] + half)
    lo2 = math.floor(-w[1] - half)
    hi2 = math.ceil(-w[1] + half)
    total = 0.0
    for n1 in range(lo1, hi1 + 1):
        for n2 in range(lo2, hi2 + 1):
            v1 = n1 + w[0]
            v2 = n2 + w[1]
            q = v1 * v1 + v1 * v2 + v2 * v2
            if level * q <= cutoff:
                total += tau ** (level * q)
    return NumericValue(total, _dropped_tail(level, cutoff, tau, 0.0))


def _dropped_tail(level: int, cutoff: float, tau: float, n_u: float) -> float:
    """Bound the sum of tau^(level*(N(v-u) - N(u))) over dropped terms.

    Dropped means level*N(v) > cutoff; N(u) = n_u.  Shells |v - u| in
    [r, r+1) hold at most 8(r+2) lattice translates, N(w) >= |w|^2/2, and
    dropped terms satisfy |v| > sqrt(2*cutoff/(3*level)).
    """
    u_norm = math.sqrt(2.0 * n_u)
    r = max(0, math.floor(math.sqrt(max(2.0 * cutoff / (3.0 * level), 0.0)) - u_norm) - 1)
    tail = 0.0
    guard = 0
    while True:
        emin = level * max(r * r / 2.0 - n_u, 0.0)
        if n_u == 0.0:
            emin = max(emin, cutoff)
        term = 8.0 * (r + 2.0) * tau ** emin
        tail += term
        r += 1
        guard += 1
        if level * (r * r / 2.0) > cutoff + level * n_u and term < 1e-300:
            break
        if guard > 200000:
            break
    return tail

"""Disc areas and counts, wall-curve sphere classes, and the differential.

A basepoint in the interior of the moment body bounds exactly one rigid disc
per facet; its area is height above the facet plane, <A, nu> + alpha.  The
generating series of these areas reproduces the defining theta sum.  Sphere
corrections live on wall curves (the P^1 dual to a honeycomb edge); their
generating series exponentiates to the correction factor C with constant
term 1.  Multiplying by the defining section on the theta basis gives the
differential table, checked against a numeric Leibniz identity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement

from .lattice import (
    LatticeVector,
    MomentPoint,
    Rational,
    coset_reps,
    enumerate_shifted_ball,
    lambda_map,
    norm_form,
)
from .series import (
    NumericValue,
    TauSeries,
    shifted_theta_value,
    theta_product_constants,
)
from .tropical import Tile, facet, polytope_contains_strictly

# The six tile-neighbor offsets, paired with the two "wing" tiles sharing
# the endpoints of the common edge.
_WINGS = {
    (1, 0): ((1, -1), (0, 1)),
    (0, 1): ((-1, 1), (1, 0)),
    (1, -1): ((1, 0), (0, -1)),
    (-1, 0): ((-1, 1), (0, -1)),
    (0, -1): ((1, -1), (-1, 0)),
    (-1, 1): ((-1, 0), (0, 1)),
}


@dataclass(frozen=True)
class DiscClass:
    """A rigid disc class: the facet it hits and its interior basepoint."""

    facet: Tile
    basepoint: MomentPoint

    def __post_init__(self):
        if not polytope_contains_strictly(self.basepoint):
            raise ValueError("basepoint must lie strictly inside the moment body")

    @property
    def area(self) -> Fraction:
        return disc_area(self.basepoint, self.facet)


def disc_area(a: MomentPoint, m: Tile) -> Fraction:
    """Exact area <A, nu(F_m)> + alpha(F_m) of the disc hitting facet m."""
    if not polytope_contains_strictly(a):
        raise ValueError("basepoint must lie strictly inside the moment body")
    f = facet(m)
    return (
        Fraction(a.xi1) * f.normal[0]
        + Fraction(a.xi2) * f.normal[1]
        + Fraction(a.eta) * f.normal[2]
        + f.offset
    )


def disc_series(a: MomentPoint, cutoff: Rational) -> TauSeries:
    """Sum of tau^area over all facets with area <= cutoff (one disc each)."""
    if not polytope_contains_strictly(a):
        raise ValueError("basepoint must lie strictly inside the moment body")
    cutoff = Fraction(cutoff)
    xi1, xi2, eta = Fraction(a.xi1), Fraction(a.xi2), Fraction(a.eta)
    # area(m) = eta - <m, xi> + N(m) = eta - N(u) + N(m - u) with u the
    # lambda-image of xi, so enumerate a shifted norm ball.
    u = lambda_map((xi1, xi2))
    bound = cutoff - eta + norm_form(u[0], u[1])
    pairs = []
    for n in enumerate_shifted_ball((-u[0], -u[1]), bound):
        m = Tile(n.n1, n.n2)
        area = eta - (xi1 * m.m1 + xi2 * m.m2) + m.vector.norm
        if area <= cutoff:
            pairs.append((area, Fraction(1)))
    return TauSeries.from_terms(pairs, cutoff)


def translate_tile(m: Tile, g: LatticeVector) -> Tile:
    """Facet relabeling matching the moment translation by g."""
    return Tile(m.m1 - g.n1, m.m2 - g.n2)


@dataclass(frozen=True)
class WallCurve:
    """The sphere class dual to a honeycomb edge, with divisor degrees.

    Degrees are the coefficients of the unique relation among the four facet
    normals around the edge, normalized so the two wing rays carry +1.
    """

    edge: tuple[Tile, Tile]
    degrees: dict[Tile, int]

    def degree(self, t: Tile) -> int:
        return self.degrees.get(t, 0)


def wall_degrees(edge: tuple[Tile, Tile]) -> WallCurve:
    ta, tb = edge
    delta = (tb.m1 - ta.m1, tb.m2 - ta.m2)
    if delta not in _WINGS:
        raise ValueError(f"tiles {ta} and {tb} are not adjacent")
    w1, w2 = _WINGS[delta]
    degrees = {
        Tile(ta.m1 + w1[0], ta.m2 + w1[1]): 1,
        Tile(ta.m1 + w2[0], ta.m2 + w2[1]): 1,
        ta: -1,
        tb: -1,
    }
    total = [0, 0, 0]
    for t, d in degrees.items():
        nu = facet(t).normal
        for i in range(3):
            total[i] += d * nu[i]
    if total != [0, 0, 0]:
        raise AssertionError("wall relation is not in the kernel of the rays")
    return WallCurve(edge, degrees)


def wall_curves_window(radius: Rational) -> list[WallCurve]:
    """Wall curves whose both tiles satisfy N(m) <= radius, deduplicated."""
    bound = Fraction(radius)
    half = math.isqrt(int(4 * bound / 3) + 1) + 1
    tiles = sorted(
        Tile(m1, m2)
        for m1 in range(-half, half + 1)
        for m2 in range(-half, half + 1)
        if m1 * m1 + m1 * m2 + m2 * m2 <= bound
    )
    tile_set = set(tiles)
    walls = []
    for t in tiles:
        for delta in ((1, 0), (0, 1), (1, -1)):
            nb = Tile(t.m1 + delta[0], t.m2 + delta[1])
            if nb in tile_set:
                walls.append(wall_degrees((t, nb)))
    return walls


@dataclass(frozen=True)
class SphereClass:
    """A nonnegative wall-curve combination with its total divisor degrees."""

    degrees: tuple[tuple[Tile, int], ...]
    total_degree: int  # tau-weight: every wall sphere has area one

    def degree_map(self) -> dict[Tile, int]:
        return dict(self.degrees)


def effective_candidates(walls: list[WallCurve], max_total: int) -> list[SphereClass]:
    """All nonnegative combinations of the walls with at most max_total terms."""
    out = []
    seen = set()
    for k in range(1, max_total + 1):
        for combo in combinations_with_replacement(range(len(walls)), k):
            acc: dict[Tile, int] = {}
            for idx in combo:
                for t, d in walls[idx].degrees.items():
                    acc[t] = acc.get(t, 0) + d
            acc = {t: d for t, d in acc.items() if d != 0}
            key = tuple(sorted((t.m1, t.m2, d) for t, d in acc.items()))
            if key in seen:
                continue
            seen.add(key)
            out.append(SphereClass(tuple(sorted(acc.items())), k))
    return out


def g_series(
    anchor: Tile, candidates: list[SphereClass], max_order: int
) -> TauSeries:
    """Open-mirror generating series for the given facet.

    Each admitted class d contributes
        (-1)^(D_I . d) * (-(D_I . d) - 1)! / prod_{I' != I} (D_I' . d)!
    weighted tau^(total degree); classes failing D_I.d < 0 or any
    D_I'.d < 0 (I' != I) contribute nothing.
    """
    pairs = []
    for cand in candidates:
        degs = cand.degree_map()
        if sum(degs.values()) != 0:
            raise ValueError("candidate has incomplete degree data")
        d_anchor = degs.get(anchor, 0)
        if d_anchor >= 0:
            continue
        if any(d < 0 for t, d in degs.items() if t != anchor):
            continue
        k = -d_anchor
        coef = Fraction((-1) ** k * math.factorial(k - 1))
        for t, d in degs.items():
            if t != anchor:
                coef /= math.factorial(d)
        pairs.append((Fraction(cand.total_degree), coef))
    return TauSeries.from_terms(pairs, Fraction(max_order))


def admitted_classes(
    walls: list[WallCurve], anchor: Tile, max_total: int
) -> list[SphereClass]:
    """Distinct admitted classes among wall combinations of size <= max_total.

    Admitted means the anchor degree is negative and every other degree is
    nonnegative.  Distinct wall combinations with equal degree maps are the
    same homology class and are kept once.  The search prunes on the
    non-anchor deficit: a wall contributes two +1 wings, so it can cancel
    at most two units of deficit, and combinations that never touch the
    anchor cannot make its degree negative.
    """
    walls = sorted(
        walls, key=lambda w: (0 if anchor in w.degrees else 1, sorted(w.edge))
    )
    out: dict[tuple, SphereClass] = {}
    n = len(walls)
    acc: dict[Tile, int] = {}
    deficit = 0  # total negative degree outside the anchor, kept incrementally

    def apply(i: int, sign: int) -> None:
        nonlocal deficit
        for t, d in walls[i].degrees.items():
            old = acc.get(t, 0)
            new = old + sign * d
            acc[t] = new
            if t != anchor:
                deficit += max(-new, 0) - max(-old, 0)

    def rec(start: int, depth: int) -> None:
        if depth > 0 and acc.get(anchor, 0) < 0 and deficit == 0:
            degs = tuple(sorted((t, d) for t, d in acc.items() if d != 0))
            key = tuple((t.m1, t.m2, d) for t, d in degs)
            if key not in out:
                out[key] = SphereClass(degs, depth)
        if depth == max_total:
            return
        for i in range(start, n):
            if depth == 0 and anchor not in walls[i].degrees:
                break  # walls are ordered anchor-first
            apply(i, +1)
            if deficit <= 2 * (max_total - depth - 1):
                rec(i, depth + 1)
            apply(i, -1)

    rec(0, 0)
    return list(out.values())


def sphere_count_C(max_order: int, window: Rational = 9) -> TauSeries:
    """exp of the anchor-facet generating series, specialized to weight tau.

    Every wall sphere has area one, so a class of total degree d carries
    tau^d.  The constant term is exactly 1.  Higher terms depend on the
    wall window and are reported as such by the CLI.
    """
    if max_order < 0:
        raise ValueError("max_order must be nonnegative")
    if max_order == 0:
        return TauSeries.one(0)
    anchor = Tile(0, 0)
    classes = admitted_classes(wall_curves_window(window), anchor, max_order)
    g = g_series(anchor, classes, max_order)
    c = g.exp()
    if c.coefficient(0) != 1:
        raise AssertionError("sphere count lost its leading 1")
    return c


@dataclass(frozen=True)
class DifferentialTable:
    """Structure constants of multiplication by the defining section.

    entries[input rep e][output rep e~] is the tau-series coefficient; the
    evaluation-side prefactor (the sphere count and the quadratic weight of
    log|x|) is applied only when evaluating numerically.
    """

    level: int
    cutoff: Fraction
    entries: dict[LatticeVector, dict[LatticeVector, TauSeries]]

    def to_json(self) -> dict:
        return {
            "level": self.level,
            "cutoff": str(self.cutoff),
            "entries": [
                {
                    "e_in": [e.n1, e.n2],
                    "out": [
                        {"e_out": [f.n1, f.n2], "series": ts.to_json()}
                        for f, ts in sorted(row.items())
                    ],
                }
                for e, row in sorted(self.entries.items())
            ],
        }


def differential_table(i: int, j: int, cutoff: Rational) -> DifferentialTable:
    """Coefficients of (defining section) * (level l-1 basis) on the level-l basis."""
    level = j - i
    if level < 2:
        raise ValueError("need j - i >= 2")
    cutoff = Fraction(cutoff)
    entries: dict[LatticeVector, dict[LatticeVector, TauSeries]] = {}
    zero = LatticeVector(0, 0)
    for e in coset_reps(level - 1):
        entries[e] = theta_product_constants(zero, 1, e, level - 1, cutoff)
    return DifferentialTable(level, cutoff, entries)


@dataclass(frozen=True)
class LeibnizReport:
    i: int
    j: int
    x: tuple[float, float]
    tau: float
    cutoff: float
    items: tuple[dict, ...]

    @property
    def passed(self) -> bool:
        return all(it["residual"] <= it["tail_bound"] for it in self.items)

    def to_json(self) -> dict:
        return {
            "i": self.i,
            "j": self.j,
            "x": [repr(v) for v in self.x],
            "tau": repr(self.tau),
            "cutoff": repr(self.cutoff),
            "passed": self.passed,
            "items": list(self.items),
        }


def shifted_basis_value(
    e: LatticeVector, level: int, xi_std: tuple[float, float], tau: float, cutoff: float
) -> NumericValue:
    """Numeric lattice sum for a basis morphism against the torus Lagrangian.

    Equals sum over n of tau^(level * N(n + w)) where w is the lambda-image
    of the base point minus e/level.
    """
    lam = ((2 * xi_std[0] - xi_std[1]) / 3.0, (2 * xi_std[1] - xi_std[0]) / 3.0)
    w = (lam[0] - e.n1 / level, lam[1] - e.n2 / level)
    return shifted_theta_value(level, w, tau, cutoff)


def leibniz_check(
    i: int,
    j: int,
    x_sample: tuple[float, float],
    tau: float,
    cutoff: Rational,
    c_order: int = 3,
    window: Rational = 9,
) -> LeibnizReport:
    """Numeric check that the differential table satisfies the Leibniz identity.

    For each input rep e of level l-1 it compares
        C * s(x) * n_e(l-1, x)   vs   C * tau^q * sum_e~ T_e~(e) n_e~(l, x)
    with q the quadratic weight of log_tau x, s the defining section, and
    n the shifted lattice sums; the residual must sit below the combined
    truncation tail bound.
    """
    level = j - i
    if level < 2:
        raise ValueError("need j - i >= 2")
    if not (0 < tau < 1):
        raise ValueError("tau must lie in (0, 1)")
    cutoff = Fraction(cutoff)
    cut_f = float(cutoff)
    log_tau = math.log(tau)
    xi = (math.log(x_sample[0]) / log_tau, math.log(x_sample[1]) / log_tau)
    lam = ((2 * xi[0] - xi[1]) / 3.0, (2 * xi[1] - xi[0]) / 3.0)
    q_weight = -(lam[0] ** 2 + lam[0] * lam[1] + lam[1] ** 2)  # kappa(log_tau x)
    c_val = sphere_count_C(c_order, window).evaluate(tau)

    # s evaluated at |x|: exponent N(n) - <n, xi> = N(n - u) - N(u).
    n_u = lam[0] ** 2 + lam[0] * lam[1] + lam[1] ** 2
    s_num = shifted_theta_value(1, (-lam[0], -lam[1]), tau, cut_f + n_u)
    s_val = s_num.value * tau ** (-n_u)
    s_tail = s_num.tail_bound * tau ** (-n_u)

    table = differential_table(i, j, cutoff)
    items = []
    for e in coset_reps(level - 1):
        ne = shifted_basis_value(e, level - 1, xi, tau, cut_f)
        lhs = c_val * s_val * ne.value
        lhs_tail = c_val * (
            abs(s_val) * ne.tail_bound + abs(ne.value) * s_tail + s_tail * ne.tail_bound
        )
        rhs = 0.0
        rhs_tail = 0.0
        for f, ts in table.entries[e].items():
            nf = shifted_basis_value(f, level, xi, tau, cut_f)
            t_val = ts.evaluate(tau)
            # Unknown tail of the structure-constant series: exponents grow
            # like N/(l(l-1)); bound with the generic shell estimate.
            t_tail = _structure_tail(level, cut_f, tau)
            rhs += t_val * nf.value
            rhs_tail += (
                abs(t_val) * nf.tail_bound
                + abs(nf.value) * t_tail
                + t_tail * nf.tail_bound
            )
        rhs *= c_val * tau ** q_weight
        rhs_tail *= c_val * tau ** q_weight
        residual = abs(lhs - rhs)
        items.append(
            {
                "e_in": [e.n1, e.n2],
                "lhs": repr(lhs),
                "rhs": repr(rhs),
                "residual": residual,
                "tail_bound": lhs_tail + rhs_tail,
            }
        )
    return LeibnizReport(i, j, x_sample, tau, cut_f, tuple(items))


def _structure_tail(level: int, cutoff: float, tau: float) -> float:
    """Tail bound for a differential-table series beyond its cutoff.

    Terms are tau^(N(w)/(level*(level-1))) over a lattice coset; shells of
    radius r contribute at most 8(r+2) terms with N >= r^2/2.
    """
    scale = level * (level - 1)
    r = 0
    tail = 0.0
    while True:
        emin = max(cutoff, r * r / (2.0 * scale))
        term = 8.0 * (r + 2) * tau ** emin
        tail += term
        r += 1
        if r * r / (2.0 * scale) > cutoff and term < 1e-300:
            break
        if r > 200000:
            break
    return tail

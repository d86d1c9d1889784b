"""Linear Lagrangians in the fiber torus: intersections and triangle counts.

The slope-k Lagrangians intersect pairwise in (j-i)^2 points indexed by
coset representatives.  Products of morphisms count triangles in the
universal cover; each triangle carries the weight tau^area.  The area is
computed two ways: geometrically from the symplectic form on the two edge
vectors, and in closed form through the lattice quadratic weight.  The two
must agree exactly, term for term.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .lattice import (
    LatticeVector,
    Rational,
    Vec2,
    coset_reps,
    enumerate_shifted_ball,
    kappa,
    lambda_map,
    norm_form,
)
from .series import TauSeries, theta_product_constants


def hom_rank(i: int, j: int) -> int:
    """Rank of the morphism space between slopes i and j.

    (j-i)^2 transverse intersection points for distinct slopes; equal slopes
    contribute the total Betti rank 4 of the two-torus.
    """
    if i == j:
        return 4
    return (j - i) ** 2


@dataclass(frozen=True)
class IntersectionPoint:
    """An intersection of the slope-i and slope-j Lagrangians, i < j."""

    i: int
    j: int
    e: LatticeVector  # representative mod (j - i)

    @property
    def position(self) -> tuple[Vec2, Vec2]:
        """(base point, angular point mod Z^2) in the universal cover."""
        l = self.j - self.i
        base = (Fraction(self.e.std[0], l), Fraction(self.e.std[1], l))
        lam = lambda_map(base)
        theta = (Fraction(-self.i) * lam[0] % 1, Fraction(-self.i) * lam[1] % 1)
        return base, theta


def intersection_points(i: int, j: int) -> list[IntersectionPoint]:
    """All (j-i)^2 intersection points of the slope-i and slope-j Lagrangians."""
    if i == j:
        raise ValueError("equal slopes intersect non-transversely; see hom_rank")
    lo, hi = min(i, j), max(i, j)
    return [IntersectionPoint(lo, hi, e) for e in coset_reps(hi - lo)]


@dataclass(frozen=True)
class TriangleDatum:
    """A triangle contributing to the product for slopes i < j < k.

    `e` indexes the output corner (level k - i); `gamma_a` is the lattice
    translate distinguishing triangles with the same corners.
    """

    i: int
    j: int
    k: int
    e: LatticeVector
    gamma_a: LatticeVector

    @property
    def xi0(self) -> Vec2:
        lp = self.j - self.i
        lpp = self.k - self.j
        l = self.k - self.i
        es = self.e.std
        gs = self.gamma_a.std
        return (
            Fraction(lpp, l * lp) * es[0] + Fraction(gs[0], lp),
            Fraction(lpp, l * lp) * es[1] + Fraction(gs[1], lp),
        )

    def edges(self) -> list[tuple[Vec2, Vec2]]:
        """The three edge vectors in R^4 = (base, angle); they sum to zero."""
        lp = self.j - self.i
        lpp = self.k - self.j
        xi0 = self.xi0
        lam = lambda_map(xi0)
        # q -> p1 has base part xi0 and angle part -i * lambda(xi0);
        # q -> p2 is (lp/lpp) * (xi0, -k * lambda(xi0)).
        e1 = (xi0, (-self.i * lam[0], -self.i * lam[1]))
        r = Fraction(lp, lpp)
        qp2 = ((r * xi0[0], r * xi0[1]), (-self.k * r * lam[0], -self.k * r * lam[1]))
        e2 = (
            (qp2[0][0] - e1[0][0], qp2[0][1] - e1[0][1]),
            (qp2[1][0] - e1[1][0], qp2[1][1] - e1[1][1]),
        )
        e3 = ((-qp2[0][0], -qp2[0][1]), (-qp2[1][0], -qp2[1][1]))
        return [e1, e2, e3]


def _omega(a: tuple[Vec2, Vec2], b: tuple[Vec2, Vec2]) -> Fraction:
    """Standard form d(base) wedge d(angle) on R^4 vectors."""
    (ab, aa), (bb, ba) = a, b
    return ab[0] * ba[0] + ab[1] * ba[1] - aa[0] * bb[0] - aa[1] * bb[1]


def triangle_area_oracle(t: TriangleDatum) -> Fraction:
    """|1/2 omega(edge1, edge2)| evaluated directly on the lifted edges."""
    e1, e2, _ = t.edges()
    # q->p2 = e1 + e2.
    qp2 = ((e1[0][0] + e2[0][0], e1[0][1] + e2[0][1]), (e1[1][0] + e2[1][0], e1[1][1] + e2[1][1]))
    return abs(_omega(e1, qp2)) / 2


def triangle_area_closed(t: TriangleDatum) -> Fraction:
    """Closed-form area -(l/(l' l'')) kappa((l''/l) e + gamma_a)."""
    lp = t.j - t.i
    lpp = t.k - t.j
    l = t.k - t.i
    es = t.e.std
    gs = t.gamma_a.std
    arg = (Fraction(lpp, l) * es[0] + gs[0], Fraction(lpp, l) * es[1] + gs[1])
    return -Fraction(l, lp * lpp) * kappa(arg)


def triangles_up_to(
    i: int, j: int, k: int, max_area: Rational
) -> list[TriangleDatum]:
    """All triangles for (i, j, k) with area at most max_area."""
    if not i < j < k:
        raise ValueError("slopes must satisfy i < j < k")
    lp, lpp, l = j - i, k - j, k - i
    out = []
    for e in coset_reps(l):
        shift = (Fraction(lpp * e.n1, l), Fraction(lpp * e.n2, l))
        for a in enumerate_shifted_ball(shift, Fraction(max_area) * lp * lpp / l):
            out.append(TriangleDatum(i, j, k, e, a))
    return out


def mu2_closed(
    i: int,
    j: int,
    k: int,
    e1: LatticeVector,
    e2: LatticeVector,
    cutoff: Rational,
) -> dict[LatticeVector, TauSeries]:
    """Triangle-count series for the product of basis morphisms.

    e1 indexes the (i, j) intersection, e2 the (j, k) one.  For each output
    representative e the series sums tau^((l/(l' l'')) N((l''/l) e + a)) over
    lattice translates a with a = e1 - e (mod l') and a = -e2 (mod l'').
    """
    if not i < j < k:
        raise ValueError("slopes must satisfy i < j < k")
    lp, lpp, l = j - i, k - j, k - i
    if not (0 <= e1.n1 < lp and 0 <= e1.n2 < lp):
        raise ValueError(f"{e1} is not a level-{lp} representative")
    if not (0 <= e2.n1 < lpp and 0 <= e2.n2 < lpp):
        raise ValueError(f"{e2} is not a level-{lpp} representative")
    cutoff = Fraction(cutoff)
    out: dict[LatticeVector, TauSeries] = {}
    for e in coset_reps(l):
        shift = (Fraction(lpp * e.n1, l), Fraction(lpp * e.n2, l))
        pairs = []
        for a in enumerate_shifted_ball(shift, cutoff * lp * lpp / l):
            if (a.n1 - e1.n1 + e.n1) % lp or (a.n2 - e1.n2 + e.n2) % lp:
                continue
            if (a.n1 + e2.n1) % lpp or (a.n2 + e2.n2) % lpp:
                continue
            exp = Fraction(l, lp * lpp) * norm_form(a.n1 + shift[0], a.n2 + shift[1])
            pairs.append((exp, Fraction(1)))
        out[e] = TauSeries.from_terms(pairs, cutoff)
    return out


@dataclass(frozen=True)
class PairResult:
    e1: LatticeVector
    e2: LatticeVector
    matches: bool
    first_mismatch: str | None


@dataclass(frozen=True)
class FunctorReport:
    """Per-basis-pair comparison of theta structure constants vs triangles."""

    i: int
    j: int
    k: int
    cutoff: Fraction
    pairs: tuple[PairResult, ...] = field(default=())

    @property
    def all_match(self) -> bool:
        return all(p.matches for p in self.pairs)

    def to_json(self) -> dict:
        return {
            "triple": [self.i, self.j, self.k],
            "cutoff": str(self.cutoff),
            "all_match": self.all_match,
            "pairs": [
                {
                    "e_in": [[p.e1.n1, p.e1.n2], [p.e2.n1, p.e2.n2]],
                    "matches": p.matches,
                    "first_mismatch": p.first_mismatch,
                }
                for p in self.pairs
            ],
        }


def functor_check(i: int, j: int, k: int, cutoff: Rational) -> FunctorReport:
    """Compare both product computations for every basis pair of (i, j, k).

    Discrepancies are report content, not exceptions.
    """
    if not i < j < k:
        raise ValueError("slopes must satisfy i < j < k")
    lp, lpp = j - i, k - j
    cutoff = Fraction(cutoff)
    results = []
    for e1 in coset_reps(lp):
        for e2 in coset_reps(lpp):
            theta = theta_product_constants(e1, lp, e2, lpp, cutoff)
            tri = mu2_closed(i, j, k, e1, e2, cutoff)
            mismatch = None
            for rep in sorted(tri):
                a = theta[rep].truncate(cutoff)
                b = tri[rep].truncate(cutoff)
                if a.terms != b.terms:
                    mismatch = (
                        f"rep ({rep.n1},{rep.n2}): theta {a} vs triangles {b}"
                    )
                    break
            results.append(PairResult(e1, e2, mismatch is None, mismatch))
    return FunctorReport(i, j, k, cutoff, tuple(results))

"""Tropicalized theta function, honeycomb tiling, moment body, toric charts.

The tropicalization phi(xi) = max over lattice n of  <xi, n> - N(n)  cuts the
plane into a honeycomb of hexagonal tiles, one per lattice point.  Each tile
carries a facet of the moment body eta >= phi(xi) with normal (-m1, -m2, 1)
and offset N(m).  Vertex charts of the body are monomial coordinate systems
in x, y, z, T glued by unimodular monomial maps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .lattice import (
    LatticeVector,
    MomentPoint,
    Rational,
    Vec2,
    lambda_map,
    norm_form,
)


@dataclass(frozen=True)
class TropValue:
    value: Fraction
    maximizers: tuple[LatticeVector, ...]


@dataclass(frozen=True, order=True)
class Tile:
    """Honeycomb tile labelled by the lattice point whose plane it carries."""

    m1: int
    m2: int

    @property
    def center(self) -> tuple[int, int]:
        return (2 * self.m1 + self.m2, self.m1 + 2 * self.m2)

    @property
    def vector(self) -> LatticeVector:
        return LatticeVector(self.m1, self.m2)


@dataclass(frozen=True)
class Facet:
    """Supporting plane data of a tile: <normal, (xi, eta)> + offset = 0."""

    normal: tuple[int, int, int]
    offset: int


@dataclass(frozen=True)
class BoundaryPoint:
    """Marker for points of the tropical curve (several maximizers)."""

    maximizers: tuple[LatticeVector, ...]


# Hexagon vertex offsets from a tile center, in cyclic order.
HEX_VERTEX_OFFSETS = ((1, 0), (1, 1), (0, 1), (-1, 0), (-1, -1), (0, -1))


def trop_phi(xi: Vec2) -> TropValue:
    """Max of <xi, n> - N(n) with all maximizers, exact.

    Reduces xi to the fundamental domain first (periodicity), where a fixed
    box |n|_inf <= 4 provably contains every candidate, then translates the
    answer back.
    """
    x1, x2 = Fraction(xi[0]), Fraction(xi[1])
    w = lambda_map((x1, x2))
    g1 = _round_half_down(w[0])
    g2 = _round_half_down(w[1])
    r1 = x1 - 2 * g1 - g2
    r2 = x2 - g1 - 2 * g2
    # In the centered domain |r|_inf <= 3/2; candidates need N(n) <= 3|n|_inf
    # and N(n) >= (3/4)|n|_inf^2, hence |n|_inf <= 4.
    best = None
    arg: list[LatticeVector] = []
    for n1 in range(-4, 5):
        for n2 in range(-4, 5):
            val = r1 * n1 + r2 * n2 - (n1 * n1 + n1 * n2 + n2 * n2)
            if best is None or val > best:
                best = val
                arg = [LatticeVector(n1, n2)]
            elif val == best:
                arg.append(LatticeVector(n1, n2))
    assert best is not None
    shift = LatticeVector(g1, g2)
    maxim = tuple(sorted(n + shift for n in arg))
    # phi(xi) = phi(r) + N(g) + <r, g> by periodicity; cross-check against
    # the direct value at a translated maximizer.
    value = best + norm_form(Fraction(g1), Fraction(g2)) + r1 * g1 + r2 * g2
    m = maxim[0]
    assert value == x1 * m.n1 + x2 * m.n2 - m.norm
    return TropValue(value, maxim)


def _round_half_down(x: Fraction) -> int:
    return math.floor(x + Fraction(1, 2))


def tile_of(xi: Vec2) -> Tile | BoundaryPoint:
    """The tile containing xi, or the boundary marker on the tropical curve."""
    tv = trop_phi(xi)
    if len(tv.maximizers) == 1:
        m = tv.maximizers[0]
        return Tile(m.n1, m.n2)
    return BoundaryPoint(tv.maximizers)


def tile_edges(t: Tile) -> list[tuple[int, int, int]]:
    """Six delimiting lines a*xi1 + b*xi2 = c as (a, b, c)."""
    c1 = 2 * t.m1 + t.m2
    c2 = t.m1 + 2 * t.m2
    d = t.m1 - t.m2
    return [
        (1, 0, c1 + 1),
        (1, 0, c1 - 1),
        (0, 1, c2 + 1),
        (0, 1, c2 - 1),
        (1, -1, d + 1),
        (1, -1, d - 1),
    ]


def tile_vertices(t: Tile) -> list[tuple[int, int]]:
    cx, cy = t.center
    return [(cx + dx, cy + dy) for dx, dy in HEX_VERTEX_OFFSETS]


def facet(t: Tile) -> Facet:
    return Facet((-t.m1, -t.m2, 1), t.m1 * t.m1 + t.m1 * t.m2 + t.m2 * t.m2)


def polytope_contains(p: MomentPoint) -> bool:
    """Exact membership test eta >= phi(xi)."""
    return Fraction(p.eta) >= trop_phi((p.xi1, p.xi2)).value


def polytope_contains_strictly(p: MomentPoint) -> bool:
    return Fraction(p.eta) > trop_phi((p.xi1, p.xi2)).value


# ---------------------------------------------------------------------------
# Monomial chart algebra over the group generated by x, y, z, T.
# The fiber product v0 = xyz has exponent vector (1, 1, 1, 0).


Monomial = tuple[int, int, int, int]  # exponents of (x, y, z, T)

V0: Monomial = (1, 1, 1, 0)


def monomial_mul(*ms: Monomial) -> Monomial:
    out = [0, 0, 0, 0]
    for m in ms:
        for i in range(4):
            out[i] += m[i]
    return tuple(out)  # type: ignore[return-value]


def monomial_str(m: Monomial) -> str:
    """Render with the v0 = xyz factor pulled out when it shortens things."""
    if min(m[:3]) >= 1:
        k = min(m[:3])
    elif max(m[:3]) <= -1:
        k = max(m[:3])
    else:
        k = 0
    rest = (m[0] - k, m[1] - k, m[2] - k, m[3])
    parts = []
    if rest[3]:
        parts.append(f"T^{rest[3]}" if rest[3] != 1 else "T")
    if k:
        parts.append(f"v0^{k}" if k != 1 else "v0")
    for name, e in zip("xyz", rest[:3]):
        if e:
            parts.append(f"{name}^{e}" if e != 1 else name)
    return "*".join(parts) if parts else "1"


@dataclass(frozen=True)
class MonomialMap:
    """A substitution x, y, z -> monomials (T fixed), acting on exponents."""

    x: Monomial
    y: Monomial
    z: Monomial

    def apply(self, m: Monomial) -> Monomial:
        out = [0, 0, 0, m[3]]
        for coeff, img in zip(m[:3], (self.x, self.y, self.z)):
            for i in range(4):
                out[i] += coeff * img[i]
        return tuple(out)  # type: ignore[return-value]

    def compose(self, other: "MonomialMap") -> "MonomialMap":
        """self after other: (self . other)(m) = self(other(m))."""
        return MonomialMap(self.apply(other.x), self.apply(other.y), self.apply(other.z))

    def inverse(self) -> "MonomialMap":
        """Exact inverse; the xyz block of every chart map is unimodular.

        With A the xyz block (columns = images) and t the T-exponent row,
        the inverse has block A^-1 and row -t A^-1.
        """
        cols = (self.x, self.y, self.z)
        a = [[cols[c][r] for c in range(3)] for r in range(3)]
        det = (
            a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
            - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
            + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
        )
        if det not in (1, -1):
            raise ValueError("monomial map is not invertible over the integers")
        adj = [[0] * 3 for _ in range(3)]
        for r in range(3):
            for c in range(3):
                sub = [
                    [a[rr][cc] for cc in range(3) if cc != c]
                    for rr in range(3)
                    if rr != r
                ]
                adj[c][r] = (-1) ** (r + c) * (
                    sub[0][0] * sub[1][1] - sub[0][1] * sub[1][0]
                )
        ainv = [[adj[r][c] * det for c in range(3)] for r in range(3)]
        t = [cols[c][3] for c in range(3)]
        tinv = [
            -sum(t[r] * ainv[r][c] for r in range(3))
            for c in range(3)
        ]
        imgs = tuple(
            (ainv[0][c], ainv[1][c], ainv[2][c], tinv[c]) for c in range(3)
        )
        return MonomialMap(*imgs)

    def __pow__(self, k: int) -> "MonomialMap":
        if k < 0:
            return self.inverse() ** (-k)
        out = IDENTITY_MAP
        for _ in range(k):
            out = self.compose(out)
        return out


IDENTITY_GENS = ((1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0))
IDENTITY_MAP = MonomialMap(*IDENTITY_GENS)

# Hexagon rotation: x -> T^-2 y^-1, y -> T x y, z -> T y z.  Preserves v0
# and has order six.
HEX_GEN = MonomialMap((0, -1, 0, -2), (1, 1, 0, 1), (0, 1, 1, 1))

# One-tile translations on the toric coordinates: the generator actions
# scale coordinates by powers of T and v0.
GAMMA_P_ACTION = MonomialMap((2, 1, 1, 3), (0, 1, 0, 0), (-1, -1, 0, -3))
GAMMA_PP_ACTION = MonomialMap((1, 0, 0, 0), (1, 2, 1, 3), (-1, -1, 0, -3))


def gamma_chart_action(g: LatticeVector) -> MonomialMap:
    """Monomial substitution realizing a lattice translation of charts."""
    out = IDENTITY_MAP
    step = GAMMA_P_ACTION if g.n1 >= 0 else GAMMA_P_ACTION.inverse()
    for _ in range(abs(g.n1)):
        out = step.compose(out)
    step = GAMMA_PP_ACTION if g.n2 >= 0 else GAMMA_PP_ACTION.inverse()
    for _ in range(abs(g.n2)):
        out = step.compose(out)
    return out


# The six vertex charts of the base tile, as coordinate monomial triples.
BASE_CHARTS: dict[int, tuple[Monomial, Monomial, Monomial]] = {
    0: ((1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0)),
    1: ((0, 1, 1, 1), (0, -1, 0, -2), (1, 1, 0, 1)),      # T v0 x^-1, T^-2 y^-1, T v0 z^-1
    2: ((1, 0, 0, 0), (1, 2, 1, 3), (-1, -1, 0, -3)),     # x, T^3 v0 y, T^-3 v0^-1 z
    3: ((-1, 0, 0, -2), (0, -1, 0, -2), (2, 2, 1, 4)),    # T^-2 x^-1, T^-2 y^-1, T^4 v0^2 z^-1
    4: ((2, 1, 1, 3), (0, 1, 0, 0), (-1, -1, 0, -3)),     # T^3 v0 x, y, T^-3 v0^-1 z
    5: ((-1, 0, 0, -2), (1, 0, 1, 1), (1, 1, 0, 1)),      # T^-2 x^-1, T v0 y^-1, T v0 z^-1
}


@dataclass(frozen=True)
class ChartLabel:
    tile: Tile
    k: int  # vertex index mod 6


@dataclass(frozen=True)
class Chart:
    """Coordinate functions of a vertex chart, as global monomials."""

    label: ChartLabel
    coords: tuple[Monomial, Monomial, Monomial]

    def coordinate_product(self) -> Monomial:
        return monomial_mul(*self.coords)

    def as_map(self) -> MonomialMap:
        return MonomialMap(*self.coords)


def chart(label: ChartLabel) -> Chart:
    """The chart at the given tile vertex; tile translates act by monomials."""
    k = label.k % 6
    base = BASE_CHARTS[k]
    act = gamma_chart_action(LatticeVector(label.tile.m1, label.tile.m2))
    coords = tuple(act.apply(m) for m in base)
    return Chart(label, coords)  # type: ignore[arg-type]


def chart_transition(a: ChartLabel, b: ChartLabel) -> MonomialMap:
    """Monomial map expressing chart-b coordinates through chart-a ones."""
    ca = chart(a).as_map()
    cb = chart(b).as_map()
    return ca.inverse().compose(cb)


# ---------------------------------------------------------------------------
# Emitters


def svg_tiling(window: tuple[float, float, float, float], scale: int = 40) -> str:
    """Honeycomb tiling over a window as an SVG document.

    Integer-scaled coordinates keep the output byte-stable across platforms.
    Tiles are stroked hexagons labelled by (m1, m2); trivalent vertices of
    the tropical curve are marked with small circles.
    """
    x0, y0, x1, y1 = window
    if x1 <= x0 or y1 <= y0:
        raise ValueError("window must have positive extent")
    pad = 3
    reach = int(max(abs(x0), abs(x1), abs(y0), abs(y1))) + pad + 2
    tiles = []
    for m1 in range(-reach, reach + 1):
        for m2 in range(-reach, reach + 1):
            cx, cy = 2 * m1 + m2, m1 + 2 * m2
            if x0 - pad <= cx <= x1 + pad and y0 - pad <= cy <= y1 + pad:
                tiles.append(Tile(m1, m2))
    tiles.sort()

    def sx(v: float) -> int:
        return round((v - x0) * scale)

    def sy(v: float) -> int:
        return round((y1 - v) * scale)

    width = sx(x1)
    height = sy(y0)
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
    ]
    vertices = set()
    for t in tiles:
        pts = tile_vertices(t)
        vertices.update(pts)
        pt_str = " ".join(f"{sx(px)},{sy(py)}" for px, py in pts)
        lines.append(
            f'<polygon points="{pt_str}" fill="none" stroke="black" stroke-width="2"/>'
        )
        cx, cy = t.center
        if x0 <= cx <= x1 and y0 <= cy <= y1:
            lines.append(
                f'<text x="{sx(cx)}" y="{sy(cy)}" font-size="{scale // 3}" '
                f'text-anchor="middle">({t.m1},{t.m2})</text>'
            )
    for vx, vy in sorted(vertices):
        if x0 <= vx <= x1 and y0 <= vy <= y1:
            lines.append(f'<circle cx="{sx(vx)}" cy="{sy(vy)}" r="3" fill="black"/>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def facet_csv(radius: Rational) -> str:
    """Facet table m1,m2,nu1,nu2,nu3,alpha for all tiles with N(m) <= radius."""
    rows = ["m1,m2,nu1,nu2,nu3,alpha"]
    tiles = []
    bound = Fraction(radius)
    half = math.isqrt(int(4 * bound / 3) + 1) + 1
    for m1 in range(-half, half + 1):
        for m2 in range(-half, half + 1):
            if m1 * m1 + m1 * m2 + m2 * m2 <= bound:
                tiles.append(Tile(m1, m2))
    tiles.sort(key=lambda t: (t.vector.norm, t.m1, t.m2))
    for t in tiles:
        f = facet(t)
        rows.append(
            f"{t.m1},{t.m2},{f.normal[0]},{f.normal[1]},{f.normal[2]},{f.offset}"
        )
    return "\n".join(rows) + "\n"

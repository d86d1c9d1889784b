"""Piecewise Kähler potential, metric certification, and monodromy.

The potential on a fiber interpolates between the three two-coordinate toric
potentials g_xy, g_xz, g_yz near a chart vertex, through bump functions of
radial and angular combinations of the coordinate norms.  All interpolation
identities used for gluing hold exactly at the bump endpoints, so the
potential is continuous across region boundaries by construction.

Everything here is double-precision numerics; the polar-coordinate metric is
obtained by forward-mode differentiation of the exact regional formulas (no
small-radius approximations), with finite differences as cross-validation
only.  Conventions:

* all logarithms of norms are natural; the angular bump arguments are
  measured in log_T units (so derivative budgets scale like 1/l);
* metric entries follow the polar Hessian normalization
  G_ii = d^2F/dr_i^2 + (1/r_i) dF/dr_i,  G_ij = d^2F/dr_i dr_j,
  under which the deep interior block is T^2 diag(8/3, 8/3, 8/3);
* positive definiteness is decided on the diagonally normalized matrix,
  which is scale-invariant and numerically robust for graded matrices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _ad
from ._ad import D2
from .lattice import Vec2
from .tropical import BoundaryPoint, tile_of

DEFAULT_T = 0.1
DEFAULT_L = 40
DEFAULT_P = 17
DEFAULT_SEED = 7
# Smallest power of two making every sampled normalized eigenvalue positive
# with margin at the defaults; frozen from calibrate_c_base().
DEFAULT_C_BASE = 2.0 ** 139

REGION_IDS = (
    "g_xy", "g_xz", "g_yz",
    "I", "IIA", "IIB", "IIC", "III", "IV", "V", "VI", "VII",
    "axis_x", "axis_y", "axis_z",
)

_FORMULA_TO_REGION = {
    "IVA": "IV", "IVB": "IV", "IVC": "IV",
    "VIA": "VI", "VIB": "VI", "VIC": "VI",
}


@dataclass(frozen=True)
class FiberPoint:
    """Norms of the three toric coordinates, with the scale parameters.

    When the point represents a fiber of the superpotential the product of
    the norms is T^l (checked by `on_fiber`); derivative machinery is free
    to step off the fiber.
    """

    r_x: float
    r_y: float
    r_z: float
    T: float = DEFAULT_T
    l: int = DEFAULT_L
    p: int = DEFAULT_P

    @property
    def r(self) -> tuple[float, float, float]:
        return (self.r_x, self.r_y, self.r_z)

    @property
    def on_fiber(self) -> bool:
        prod = self.r_x * self.r_y * self.r_z
        return abs(prod - self.T ** self.l) <= 1e-12 * self.T ** self.l

    def logs(self) -> tuple[float, float, float]:
        """log_T of the three norms."""
        ln_t = math.log(self.T)
        return (
            math.log(self.r_x) / ln_t,
            math.log(self.r_y) / ln_t,
            math.log(self.r_z) / ln_t,
        )

    @staticmethod
    def from_logs(
        a: float, b: float, c: float | None = None,
        T: float = DEFAULT_T, l: int = DEFAULT_L, p: int = DEFAULT_P,
    ) -> "FiberPoint":
        """Build from log_T norms; omitting c closes the fiber constraint."""
        if c is None:
            c = l - a - b
        return FiberPoint(T ** a, T ** b, T ** c, T, l, p)


@dataclass(frozen=True)
class BumpProfile:
    """The four interpolation profiles, as rescaled quintic smoothsteps.

    Radial profiles are functions of log_T of the radial coordinate over the
    annulus [l/4 - l/p, l/4]; angular profiles are functions of log_T norm
    ratios.  Quintic steps have vanishing first and second derivatives at
    their endpoints, so all gluing identities hold with exact endpoint
    values and the derivative budgets scale like p/l and (p/l)^2.
    """

    l: int = DEFAULT_L
    p: int = DEFAULT_P
    T: float = DEFAULT_T

    @property
    def d_inner(self) -> float:  # log_T of the interior boundary value
        return self.l / 4

    @property
    def d_outer(self) -> float:
        return self.l / 4 - self.l / self.p

    @property
    def t1(self) -> float:  # angular band edges, log_T units
        return self.l / 8 - self.l / self.p

    @property
    def t0(self) -> float:
        return self.l / 8 - 2 * self.l / self.p

    @property
    def w_sliver(self) -> float:
        return 0.5

    @property
    def w_ramp(self) -> float:
        return 0.5 + self.l / (2 * self.p)

    def a3(self, d):
        """Radial weight in [2/3, 1]; 2/3 at the interior, 1 at the outer edge."""
        return 1.0 - _smoothstep(self._radial_s(d)) * (1.0 / 3.0)

    def a5(self, d):
        """Radial gate in [0, 1]; 0 at the interior, 1 at the outer edge."""
        return 1.0 - _smoothstep(self._radial_s(d))

    def _radial_s(self, d):
        if _value(d) <= 0.0:
            return 1.0  # interior clamp
        return (_log(d) * (1.0 / math.log(self.T)) - self.d_outer) * (self.p / self.l)

    def a4(self, w):
        """Odd angular weight in [-1/2, 1/2] of a log_T norm ratio.

        Constant 0 on the sliver |w| <= 1/2 (ratio within one T-order) and
        saturated at +-1/2 beyond w_ramp.
        """
        if _value(w) < 0.0:
            return -self.a4(-w)
        s = (w - self.w_sliver) * (1.0 / (self.w_ramp - self.w_sliver))
        return _smoothstep(s) * 0.5

    def a6(self, theta):
        """Angular blend in [0, 1]: 0 at the pure sector, 1 at the midband."""
        s = (self.t1 - theta) * (1.0 / (self.t1 - self.t0))
        return _smoothstep(s)

    def derivative_budget(self, samples: int = 200) -> dict:
        """Measured max log-derivatives of the profiles, with budget constants.

        Reports c such that |d alpha / d(log arg)| <= c / l and the second
        derivative is <= c^2 / l^2 at the sampled arguments.
        """
        out = {}
        h = 1e-4
        for name, fn, lo, hi in (
            ("a3", lambda s: float(self.a3(self.T ** s)), self.d_outer, self.d_inner),
            ("a5", lambda s: float(self.a5(self.T ** s)), self.d_outer, self.d_inner),
            ("a4", lambda s: float(self.a4(s)), -self.w_ramp - 1, self.w_ramp + 1),
            ("a6", lambda s: float(self.a6(s)), self.t0 - 1, self.t1 + 1),
        ):
            d1 = d2 = 0.0
            for k in range(samples + 1):
                s = lo + (hi - lo) * k / samples
                f0, fp, fm = fn(s), fn(s + h), fn(s - h)
                d1 = max(d1, abs(fp - fm) / (2 * h))
                d2 = max(d2, abs(fp - 2 * f0 + fm) / (h * h))
            out[name] = {
                "max_d1": d1,
                "max_d2": d2,
                "c1": d1 * self.l,
                "c2": math.sqrt(max(d2, 0.0)) * self.l if d2 > 0 else 0.0,
            }
        return out


def _value(x) -> float:
    return x.v if isinstance(x, D2) else float(x)


def _log(x):
    return _ad.log(x) if isinstance(x, D2) else math.log(x)


def _log1p(x):
    return _ad.log1p(x) if isinstance(x, D2) else math.log1p(x)


def _smoothstep(t):
    """Quintic step: 0 below 0, 1 above 1, C^2 at both ends."""
    tv = _value(t)
    if tv <= 0.0:
        return 0.0
    if tv >= 1.0:
        return 1.0
    return t * t * t * (10.0 + t * (-15.0 + 6.0 * t))


# ---------------------------------------------------------------------------
# Region classification


def _float_phis(q: FiberPoint) -> tuple[float, float, float]:
    T = q.T
    rx, ry, rz = q.r
    px = math.log1p((T * rx) ** 2) - math.log1p((T * T * ry * rz) ** 2)
    py = math.log1p((T * ry) ** 2) - math.log1p((T * T * rx * rz) ** 2)
    pz = math.log1p((T * rz) ** 2) - math.log1p((T * T * rx * ry) ** 2)
    return px, py, pz


def phi_xyz(q: FiberPoint) -> tuple[float, float, float]:
    """The three log_T-normalized coordinate combinations."""
    ln_t = math.log(q.T)
    px, py, pz = _float_phis(q)
    return (px / ln_t, py / ln_t, pz / ln_t)


def formula_key(q: FiberPoint) -> str:
    """Internal dispatch label (splits the IV and VI bands into thirds)."""
    a, b, c = q.logs()
    m_thr = 2.0
    moderate = [i for i, v in enumerate((a, b, c)) if v <= m_thr]
    if len(moderate) >= 2:
        if len(moderate) == 3:
            raise ValueError("point is not near a deep fiber")
        pair = {0, 1, 2} - set(moderate)
        return {2: "g_xy", 1: "g_xz", 0: "g_yz"}[pair.pop()]
    if len(moderate) == 1:
        return ("axis_x", "axis_y", "axis_z")[moderate[0]]
    px, py, pz = _float_phis(q)
    d_i = px - 0.5 * (py + pz)
    d_iii = py - 0.5 * (px + pz)
    d_v = pz - 0.5 * (px + py)
    d_lo = q.T ** (q.l / 4)
    if max(d_i, d_iii, d_v) <= d_lo:
        return "VII"
    prof = BumpProfile(q.l, q.p, q.T)
    t0, t1 = prof.t0, prof.t1
    fam = max(range(3), key=lambda i: (d_i, d_iii, d_v)[i])
    if fam == 0:  # x dominant
        u, v = b - a, c - a
        if u >= t1 and v >= t1:
            return "I"
        if u <= v:
            return "IIA" if u >= t0 else "IIB"
        return "VIC" if v >= t0 else "VIB"
    if fam == 1:  # y dominant
        u, v = a - b, c - b
        if u >= t1 and v >= t1:
            return "III"
        if u <= v:
            return "IIC" if u >= t0 else "IIB"
        return "IVA" if v >= t0 else "IVB"
    u, v = b - c, a - c  # z dominant
    if u >= t1 and v >= t1:
        return "V"
    if u <= v:
        return "IVC" if u >= t0 else "IVB"
    return "VIA" if v >= t0 else "VIB"


def region_classify(q: FiberPoint) -> str:
    """The region identifier of a fiber point (IV and VI bands unsplit)."""
    key = formula_key(q)
    return _FORMULA_TO_REGION.get(key, key)


# ---------------------------------------------------------------------------
# Potential and metric


def _potential_ad(q: FiberPoint, prof: BumpProfile, key: str) -> D2:
    T = q.T
    ln_t = math.log(T)
    rx = D2.var(q.r_x, 0)
    ry = D2.var(q.r_y, 1)
    rz = D2.var(q.r_z, 2)

    def lp(k: int, u: D2) -> D2:
        return _log1p(u * u * T ** (2 * k))

    g_xy = lp(1, rx) + lp(1, ry) + lp(2, rx * ry)
    g_xz = lp(1, rx) + lp(1, rz) + lp(2, rx * rz)
    g_yz = lp(1, ry) + lp(1, rz) + lp(2, ry * rz)
    if key == "g_xy":
        return g_xy
    if key == "g_xz":
        return g_xz
    if key == "g_yz":
        return g_yz
    if key == "VII":
        return (g_xy + g_xz + g_yz) * (1.0 / 3.0)

    px = lp(1, rx) - lp(2, ry * rz)
    py = lp(1, ry) - lp(2, rx * rz)
    pz = lp(1, rz) - lp(2, rx * ry)
    d_i = px - (py + pz) * 0.5
    d_iii = py - (px + pz) * 0.5
    d_v = pz - (px + py) * 0.5
    th_i = py - pz
    th_iii = pz - px
    th_v = px - py
    # Angular log_T ratios for the odd profile and the sector blends.
    w_i = (_log(rz) - _log(ry)) * (1.0 / ln_t)
    w_iii = (_log(rx) - _log(rz)) * (1.0 / ln_t)
    w_v = (_log(ry) - _log(rx)) * (1.0 / ln_t)

    if key == "I":
        return g_yz + prof.a3(d_i) * d_i + prof.a4(w_i) * prof.a5(d_i) * th_i
    if key == "III":
        return g_xz + prof.a3(d_iii) * d_iii + prof.a4(w_iii) * prof.a5(d_iii) * th_iii
    if key == "V":
        return g_xy + prof.a3(d_v) * d_v + prof.a4(w_v) * prof.a5(d_v) * th_v
    if key == "axis_x":
        return g_yz + d_i + prof.a4(w_i) * th_i
    if key == "axis_y":
        return g_xz + d_iii + prof.a4(w_iii) * th_iii
    if key == "axis_z":
        return g_xy + d_v + prof.a4(w_v) * th_v

    if key == "IIA":
        a6 = prof.a6(w_v)  # w_v = log_T(r_y / r_x)
        d = d_i + 1.5 * a6 * py
        return g_yz - a6 * py + prof.a3(d) * d + 0.5 * prof.a5(d) * (py - pz - a6 * py)
    if key == "IIB":
        d = px + py - pz * 0.5
        return (g_yz - py) + prof.a3(d) * d - 0.5 * prof.a5(d) * pz
    if key == "IIC":
        a6 = prof.a6(-w_v)
        d = d_iii + 1.5 * a6 * px
        return g_xz - a6 * px + prof.a3(d) * d + 0.5 * prof.a5(d) * (px - pz - a6 * px)
    if key == "IVA":
        a6 = prof.a6(w_i)  # w_i = log_T(r_z / r_y)
        d = d_iii + 1.5 * a6 * pz
        return g_xz - a6 * pz + prof.a3(d) * d + 0.5 * prof.a5(d) * (pz - px - a6 * pz)
    if key == "IVB":
        d = py + pz - px * 0.5
        return (g_xz - pz) + prof.a3(d) * d - 0.5 * prof.a5(d) * px
    if key == "IVC":
        a6 = prof.a6(-w_i)
        d = d_v + 1.5 * a6 * py
        return g_xy - a6 * py + prof.a3(d) * d + 0.5 * prof.a5(d) * (py - px - a6 * py)
    if key == "VIA":
        a6 = prof.a6(w_iii)  # w_iii = log_T(r_x / r_z)
        d = d_v + 1.5 * a6 * px
        return g_xy - a6 * px + prof.a3(d) * d + 0.5 * prof.a5(d) * (px - py - a6 * px)
    if key == "VIB":
        d = pz + px - py * 0.5
        return (g_xy - px) + prof.a3(d) * d - 0.5 * prof.a5(d) * py
    if key == "VIC":
        a6 = prof.a6(-w_iii)
        d = d_i + 1.5 * a6 * pz
        return g_yz - a6 * pz + prof.a3(d) * d + 0.5 * prof.a5(d) * (pz - py - a6 * pz)
    raise ValueError(f"unknown region formula {key!r}")


def kahler_F(q: FiberPoint, prof: BumpProfile | None = None) -> float:
    """Value of the regional potential at a fiber point."""
    prof = prof or BumpProfile(q.l, q.p, q.T)
    return _potential_ad(q, prof, formula_key(q)).v


@dataclass(frozen=True)
class MetricSample:
    point: FiberPoint
    region: str
    matrix: np.ndarray
    min_eigenvalue: float  # of the diagonally normalized matrix

    @property
    def raw_min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.matrix)[0])


def metric(
    q: FiberPoint,
    prof: BumpProfile | None = None,
    c_base: float = DEFAULT_C_BASE,
    key: str | None = None,
) -> MetricSample:
    """Polar-coordinate metric sample at q, base term included.

    The base contribution c_base * |xyz|^2 adds the rank-one positive piece
    that removes the flat direction where the fiber potential degenerates to
    a two-coordinate one.
    """
    prof = prof or BumpProfile(q.l, q.p, q.T)
    key = key or formula_key(q)
    f = _potential_ad(q, prof, key)
    if c_base:
        rx = D2.var(q.r_x, 0)
        ry = D2.var(q.r_y, 1)
        rz = D2.var(q.r_z, 2)
        u = rx * ry * rz
        f = f + (u * u) * c_base
    h = _ad.hessian_matrix(f)
    g = f.g
    mat = np.array(
        [
            [h[0][0] + g[0] / q.r_x, h[0][1], h[0][2]],
            [h[1][0], h[1][1] + g[1] / q.r_y, h[1][2]],
            [h[2][0], h[2][1], h[2][2] + g[2] / q.r_z],
        ]
    )
    diag = np.diagonal(mat)
    if np.any(diag <= 0):
        min_eig = -float("inf")
    else:
        d = 1.0 / np.sqrt(diag)
        normalized = mat * np.outer(d, d)
        min_eig = float(np.linalg.eigvalsh(normalized)[0])
    return MetricSample(q, _FORMULA_TO_REGION.get(key, key), mat, min_eig)


def derivative_check(
    q: FiberPoint,
    prof: BumpProfile | None = None,
    h_grad: float = 1e-6,
    h_hess: float = 1e-4,
) -> tuple[float, float]:
    """Relative deviation of analytic vs central-difference log-derivatives.

    Gradient step follows the stated 1e-6 in log r; the Hessian uses a
    larger step to stay above second-difference roundoff.
    """
    prof = prof or BumpProfile(q.l, q.p, q.T)
    key = formula_key(q)

    def f_at(da: float, db: float, dc: float) -> float:
        qq = FiberPoint(
            q.r_x * math.exp(da), q.r_y * math.exp(db), q.r_z * math.exp(dc),
            q.T, q.l, q.p,
        )
        return _potential_ad(qq, prof, key).v

    f = _potential_ad(q, prof, key)
    g_log = np.array([f.g[i] * q.r[i] for i in range(3)])
    h = _ad.hessian_matrix(f)
    h_log = np.array(
        [
            [
                h[i][j] * q.r[i] * q.r[j] + (g_log[i] if i == j else 0.0)
                for j in range(3)
            ]
            for i in range(3)
        ]
    )
    fd_g = np.zeros(3)
    for i in range(3):
        step = [0.0, 0.0, 0.0]
        step[i] = h_grad
        fd_g[i] = (f_at(*step) - f_at(*[-s for s in step])) / (2 * h_grad)
    fd_h = np.zeros((3, 3))
    f0 = f_at(0.0, 0.0, 0.0)
    for i in range(3):
        step = [0.0, 0.0, 0.0]
        step[i] = h_hess
        fd_h[i][i] = (f_at(*step) + f_at(*[-s for s in step]) - 2 * f0) / h_hess ** 2
    for i in range(3):
        for j in range(i + 1, 3):
            pp = [0.0, 0.0, 0.0]
            pp[i], pp[j] = h_hess, h_hess
            pm = [0.0, 0.0, 0.0]
            pm[i], pm[j] = h_hess, -h_hess
            mp = [-v for v in pm]
            mm = [-v for v in pp]
            fd_h[i][j] = fd_h[j][i] = (
                f_at(*pp) - f_at(*pm) - f_at(*mp) + f_at(*mm)
            ) / (4 * h_hess ** 2)
    rel_g = float(np.linalg.norm(g_log - fd_g) / max(np.linalg.norm(g_log), 1e-300))
    rel_h = float(np.linalg.norm(h_log - fd_h) / max(np.linalg.norm(h_log), 1e-300))
    return rel_g, rel_h


# ---------------------------------------------------------------------------
# Moment coordinates, transport, monodromy


def moment_coords(q: FiberPoint, prof: BumpProfile | None = None) -> tuple[float, float, float]:
    """Action coordinates from the potential's log-derivatives.

    Oriented so both base coordinates are increasing in the corresponding
    norms at fixed fiber; constants are pinned by the base-tile chart
    convention (no additive adjustment).
    """
    prof = prof or BumpProfile(q.l, q.p, q.T)
    f = _potential_ad(q, prof, formula_key(q))
    fx = f.g[0] * q.r_x
    fy = f.g[1] * q.r_y
    fz = f.g[2] * q.r_z
    return (0.5 * (fx - fz), 0.5 * (fy - fz), 0.5 * fz)


def moment_shift_gamma_prime(q: FiberPoint, prof: BumpProfile | None = None) -> tuple[float, float]:
    """Base-coordinate shift produced by the one-tile chart change.

    Gluing across the z-axis changes the potential by -log|Tz|^2 and across
    the x-axis by -log|Tx|^2; composing the two (z-side minus x-side) must
    shift (xi1, xi2) by exactly (2, 1).
    """
    prof = prof or BumpProfile(q.l, q.p, q.T)
    key = formula_key(q)
    base = _potential_ad(q, prof, key)

    def coords(f: D2) -> tuple[float, float]:
        fx = f.g[0] * q.r_x
        fy = f.g[1] * q.r_y
        fz = f.g[2] * q.r_z
        return (0.5 * (fx - fz), 0.5 * (fy - fz))

    rx = D2.var(q.r_x, 0)
    rz = D2.var(q.r_z, 2)
    f_zglue = base - _log(rz * rz * q.T * q.T)
    f_xglue = base - _log(rx * rx * q.T * q.T)
    cz = coords(f_zglue)
    cx = coords(f_xglue)
    return (cz[0] - cx[0], cz[1] - cx[1])


def transport_fractions(q: FiberPoint) -> tuple[float, float, float]:
    """Monodromy phase fractions r_i^-2 / sum r_j^-2; they sum to one."""
    inv = (q.r_x ** -2.0, q.r_y ** -2.0, q.r_z ** -2.0)
    s = sum(inv)
    return (inv[0] / s, inv[1] / s, inv[2] / s)


def monodromy_class(xi: Vec2) -> tuple[int, int]:
    """Integer monodromy data of the tile containing xi.

    The loop around the degenerate fiber rotates the phase of the
    coordinate vanishing on the tile's divisor; per tile m the angular
    shift is -m.  Raises on the tropical curve, where the class jumps.
    """
    t = tile_of(xi)
    if isinstance(t, BoundaryPoint):
        raise ValueError("monodromy class is undefined on region boundaries")
    return (-t.m1, -t.m2)


def monodromy_corner_table() -> dict[tuple[int, int], tuple[Fraction, Fraction]]:
    """Representative interior points of the four classes in one cell.

    The fundamental parallelogram centered at the chart vertex (-1, -1)
    meets the four tiles carrying classes (0,0), (0,1), (1,0), (1,1).
    """
    f = Fraction
    return {
        (0, 0): (f(1, 2), f(1, 2)),       # upper right: z-vanishing tile
        (0, 1): (f(-1, 2), f(-3, 2)),     # right: y-vanishing tile
        (1, 0): (f(-3, 2), f(-1, 2)),     # left: x-vanishing tile
        (1, 1): (f(-5, 2), f(-5, 2)),     # bottom left
    }


def harmonic_difference_check(q: FiberPoint) -> float:
    """Residue of the pullback identity for the two-coordinate potential.

    The hexagon generator sends (x, y) to (T^-2 y^-1, T x y); its pullback
    of g_xy differs from g_xy by the harmonic term -log|Ty|^2, so the
    returned combination vanishes identically.
    """
    t, ry = q.T, q.r_y
    return (
        math.log1p((1.0 / (t * ry)) ** 2)
        - math.log1p((t * ry) ** 2)
        + math.log((t * ry) ** 2)
    )


def hex_orbit(q: FiberPoint) -> list[tuple[float, float, float]]:
    """Norm triples along the order-six hexagon rotation orbit of q."""
    t = q.T
    out = [(q.r_x, q.r_y, q.r_z)]
    for _ in range(5):
        rx, ry, rz = out[-1]
        out.append((1.0 / (t * t * ry), t * rx * ry, t * ry * rz))
    return out


def harmonic_sixfold_check(q: FiberPoint) -> float:
    """Sum of the six single-step pullback corrections; telescopes to zero."""
    t = q.T
    return sum(-math.log((t * ry) ** 2) for _, ry, _ in hex_orbit(q))


# ---------------------------------------------------------------------------
# Region samplers and the positivity certificate


def _sampler_windows(l: int, p: int) -> dict:
    prof = BumpProfile(l, p)  # band edges do not involve T
    a_lo = l / 8 - l / (2 * p) - 1 + 0.02
    a_hi = l / 8 - 1 - 0.02
    return {
        "prof": prof,
        "a_lo": a_lo,
        "a_hi": a_hi,
        "t0": prof.t0,
        "t1": prof.t1,
    }


def region_samples(
    region: str,
    count: int,
    seed: int = DEFAULT_SEED,
    T: float = DEFAULT_T,
    l: int = DEFAULT_L,
    p: int = DEFAULT_P,
) -> list[FiberPoint]:
    """Deterministic seeded samples lying in the requested region.

    Per-sample generator streams keyed by (seed, region, index) keep the
    output independent of evaluation order.
    """
    if region not in REGION_IDS:
        raise ValueError(f"unknown region {region!r}")
    win = _sampler_windows(l, p)
    a_lo, a_hi, t0, t1 = win["a_lo"], win["a_hi"], win["t0"], win["t1"]
    ridx = REGION_IDS.index(region)
    out = []
    for idx in range(count):
        rng = np.random.default_rng((seed, ridx, idx))

        def u(lo: float, hi: float) -> float:
            return float(rng.uniform(lo, hi))

        if region == "VII":
            a = l / 3 + u(-0.5, 0.5)
            b = l / 3 + u(-0.5, 0.5)
            q = FiberPoint.from_logs(a, b, None, T, l, p)
        elif region == "I":
            a = u(a_lo, a_hi)
            w = u(-8.0, 8.0)
            q = FiberPoint.from_logs(a, (l - a - w) / 2, (l - a + w) / 2, T, l, p)
        elif region == "IIA":
            a = u(a_lo, a_hi)
            th = u(t0 + 0.02, t1 - 0.02)
            q = FiberPoint.from_logs(a, a + th, None, T, l, p)
        elif region == "IIB":
            a = u(a_lo, a_hi)
            th = u(-t0 + 0.02, t0 - 0.02)
            q = FiberPoint.from_logs(a, a + th, None, T, l, p)
        elif region == "IIC":
            b = u(a_lo, a_hi)
            th = u(t0 + 0.02, t1 - 0.02)
            q = FiberPoint.from_logs(b + th, b, None, T, l, p)
        elif region == "III":
            b = u(a_lo, a_hi)
            w = u(-8.0, 8.0)
            q = FiberPoint.from_logs((l - b + w) / 2, b, (l - b - w) / 2, T, l, p)
        elif region == "IV":
            m = u(a_lo, a_hi)
            d = u(-t1 + 0.02, t1 - 0.02)
            b, c = (m, m + d) if d >= 0 else (m - d, m)
            q = FiberPoint.from_logs(l - b - c, b, c, T, l, p)
        elif region == "V":
            c = u(a_lo, a_hi)
            w = u(-8.0, 8.0)
            q = FiberPoint.from_logs((l - c - w) / 2, (l - c + w) / 2, c, T, l, p)
        elif region == "VI":
            m = u(a_lo, a_hi)
            d = u(-t1 + 0.02, t1 - 0.02)
            c, a = (m, m + d) if d >= 0 else (m - d, m)
            q = FiberPoint.from_logs(a, l - a - c, c, T, l, p)
        elif region == "g_xy":
            a, b = u(-1.0, 1.0), u(-1.0, 1.0)
            q = FiberPoint.from_logs(a, b, None, T, l, p)
        elif region == "g_xz":
            a, c = u(-1.0, 1.0), u(-1.0, 1.0)
            q = FiberPoint.from_logs(a, l - a - c, c, T, l, p)
        elif region == "g_yz":
            b, c = u(-1.0, 1.0), u(-1.0, 1.0)
            q = FiberPoint.from_logs(l - b - c, b, c, T, l, p)
        elif region == "axis_x":
            a = u(-1.0, 1.0)
            w = u(-3.0, 3.0)
            q = FiberPoint.from_logs(a, (l - a - w) / 2, (l - a + w) / 2, T, l, p)
        elif region == "axis_y":
            b = u(-1.0, 1.0)
            w = u(-3.0, 3.0)
            q = FiberPoint.from_logs((l - b + w) / 2, b, (l - b - w) / 2, T, l, p)
        else:  # axis_z
            c = u(-1.0, 1.0)
            w = u(-3.0, 3.0)
            q = FiberPoint.from_logs((l - c - w) / 2, (l - c + w) / 2, c, T, l, p)
        out.append(q)
    return out


def metric_certificate(
    T: float = DEFAULT_T,
    l: int = DEFAULT_L,
    p: int = DEFAULT_P,
    samples: int = 500,
    seed: int = DEFAULT_SEED,
    c_base: float = DEFAULT_C_BASE,
) -> dict:
    """Sampled positive-definiteness certificate, region by region."""
    prof = BumpProfile(l, p, T)
    regions = {}
    status = "pass"
    if samples <= 0:
        status = "indeterminate"
    for region in REGION_IDS:
        worst = None
        worst_point = None
        for q in region_samples(region, samples, seed, T, l, p):
            ms = metric(q, prof, c_base)
            if worst is None or ms.min_eigenvalue < worst:
                worst = ms.min_eigenvalue
                worst_point = q.logs()
        regions[region] = {
            "samples": samples,
            "min_eig": None if worst is None else worst,
            "worst_point": None if worst_point is None else list(worst_point),
        }
        if worst is not None and worst <= 0:
            status = "fail"
    return {
        "T": T,
        "l": l,
        "p": p,
        "seed": seed,
        "c_base": c_base,
        "status": status,
        "regions": regions,
    }


def potential_value(q: FiberPoint, key: str, prof: BumpProfile | None = None) -> float:
    """Potential evaluated with an explicit region formula (for seam tests)."""
    prof = prof or BumpProfile(q.l, q.p, q.T)
    return _potential_ad(q, prof, key).v


def boundary_pair_catalog(
    T: float = DEFAULT_T, l: int = DEFAULT_L, p: int = DEFAULT_P, eps: float = 1e-8
) -> list[tuple[FiberPoint, FiberPoint]]:
    """Point pairs straddling every region seam by eps in log coordinates.

    The regional formulas agree exactly on the seams (bump endpoints), so
    the potential jump across each pair is bounded by eps times a local
    derivative scale.
    """
    prof = BumpProfile(l, p, T)
    t0, t1 = prof.t0, prof.t1
    a_mid = (l / 8 - l / (2 * p) - 1 + l / 8 - 1) / 2
    a_inner = l / 8 - 1  # log_T D = l/4 there

    def sym(a: float) -> FiberPoint:
        return FiberPoint.from_logs(a, (l - a) / 2, (l - a) / 2, T, l, p)

    def xfam(a: float, th: float) -> FiberPoint:
        return FiberPoint.from_logs(a, a + th, None, T, l, p)

    def yfam(b: float, th_x: float) -> FiberPoint:
        # th_x = a - b toward the x sector
        return FiberPoint.from_logs(b + th_x, b, None, T, l, p)

    def yz(b: float, v: float) -> FiberPoint:
        # v = c - b toward the z sector
        return FiberPoint.from_logs(l - 2 * b - v, b, b + v, T, l, p)

    def zx(c: float, v: float) -> FiberPoint:
        # v = a - c toward the x sector
        return FiberPoint.from_logs(c + v, l - 2 * c - v, c, T, l, p)

    pairs = [
        (sym(a_inner - eps), sym(a_inner + eps)),            # I <-> VII
        (xfam(a_mid, t1 + eps), xfam(a_mid, t1 - eps)),      # I <-> IIA
        (xfam(a_mid, t0 + eps), xfam(a_mid, t0 - eps)),      # IIA <-> IIB
        (xfam(a_mid, -t0 + eps), xfam(a_mid, -t0 - eps)),    # IIB <-> IIC
        (yfam(a_mid, t1 - eps), yfam(a_mid, t1 + eps)),      # IIC <-> III
        (yz(a_mid, t1 + eps), yz(a_mid, t1 - eps)),          # III <-> IVA
        (yz(a_mid, t0 + eps), yz(a_mid, t0 - eps)),          # IVA <-> IVB
        (yz(a_mid, -t0 + eps), yz(a_mid, -t0 - eps)),        # IVB <-> IVC
        (
            FiberPoint.from_logs(l - 2 * a_mid - t1 + eps, a_mid + t1 - eps, a_mid, T, l, p),
            FiberPoint.from_logs(l - 2 * a_mid - t1 - eps, a_mid + t1 + eps, a_mid, T, l, p),
        ),                                                   # IVC <-> V (z anchored)
        (zx(a_mid, t1 + eps), zx(a_mid, t1 - eps)),          # V <-> VIA
        (zx(a_mid, t0 + eps), zx(a_mid, t0 - eps)),          # VIA <-> VIB
        (zx(a_mid, -t0 + eps), zx(a_mid, -t0 - eps)),        # VIB <-> VIC
        (
            FiberPoint.from_logs(a_mid, l - 2 * a_mid - t1 + eps, a_mid + t1 - eps, T, l, p),
            FiberPoint.from_logs(a_mid, l - 2 * a_mid - t1 - eps, a_mid + t1 + eps, T, l, p),
        ),                                                   # VIC <-> I (x anchored)
        (sym(2.0 - eps), sym(2.0 + eps)),                    # axis_x <-> clamped I
        (
            FiberPoint.from_logs(0.5, 2.0 - eps, None, T, l, p),
            FiberPoint.from_logs(0.5, 2.0 + eps, None, T, l, p),
        ),                                                   # g_xy <-> axis_x
    ]
    return pairs


def calibrate_c_base(
    T: float = DEFAULT_T,
    l: int = DEFAULT_L,
    p: int = DEFAULT_P,
    samples: int = 60,
    seed: int = DEFAULT_SEED,
    margin: float = 1e-9,
) -> float:
    """Smallest power of two whose sampled min-eigenvalues all clear margin."""
    prof = BumpProfile(l, p, T)
    pts = [
        q
        for region in REGION_IDS
        for q in region_samples(region, samples, seed, T, l, p)
    ]
    for k in range(-80, 200):
        c = 2.0 ** k
        if all(metric(q, prof, c).min_eigenvalue > margin for q in pts):
            return c
    raise RuntimeError("no power-of-two base coefficient certified positivity")

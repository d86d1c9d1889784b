"""Second-order forward-mode differentiation in three variables.

Carries value, gradient and symmetric Hessian through arithmetic, so each
potential evaluation yields the full 3x3 polar Hessian analytically.  Kept
dependency-free and tuple-based; profile before reaching for numpy here,
the matrices are only 3x3.
"""

from __future__ import annotations

import math

_Z3 = (0.0, 0.0, 0.0)
_Z6 = (0.0, 0.0, 0.0, 0.0, 0.0, 0.0)
# Hessian packing order: xx, xy, xz, yy, yz, zz.
_PAIRS = ((0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2))


class D2:
    """A scalar with first and second derivatives w.r.t. three variables."""

    __slots__ = ("v", "g", "h")

    def __init__(self, v: float, g=_Z3, h=_Z6):
        self.v = v
        self.g = g
        self.h = h

    @staticmethod
    def var(value: float, index: int) -> "D2":
        g = [0.0, 0.0, 0.0]
        g[index] = 1.0
        return D2(value, tuple(g), _Z6)

    @staticmethod
    def const(value: float) -> "D2":
        return D2(value, _Z3, _Z6)

    def __add__(self, o):
        if not isinstance(o, D2):
            return D2(self.v + o, self.g, self.h)
        return D2(
            self.v + o.v,
            tuple(a + b for a, b in zip(self.g, o.g)),
            tuple(a + b for a, b in zip(self.h, o.h)),
        )

    __radd__ = __add__

    def __neg__(self):
        return D2(-self.v, tuple(-a for a in self.g), tuple(-a for a in self.h))

    def __sub__(self, o):
        if not isinstance(o, D2):
            return D2(self.v - o, self.g, self.h)
        return self + (-o)

    def __rsub__(self, o):
        return (-self) + o

    def __mul__(self, o):
        if not isinstance(o, D2):
            return D2(self.v * o, tuple(a * o for a in self.g), tuple(a * o for a in self.h))
        g = tuple(self.g[i] * o.v + self.v * o.g[i] for i in range(3))
        h = tuple(
            self.h[k] * o.v
            + self.v * o.h[k]
            + self.g[i] * o.g[j]
            + self.g[j] * o.g[i]
            for k, (i, j) in enumerate(_PAIRS)
        )
        return D2(self.v * o.v, g, h)

    __rmul__ = __mul__

    def __truediv__(self, o):
        if not isinstance(o, D2):
            return self * (1.0 / o)
        return self * o.reciprocal()

    def __rtruediv__(self, o):
        return self.reciprocal() * o

    def reciprocal(self) -> "D2":
        inv = 1.0 / self.v
        return self._chain(inv, -inv * inv, 2.0 * inv * inv * inv)

    def _chain(self, f: float, fp: float, fpp: float) -> "D2":
        """Compose with a scalar function given f(v), f'(v), f''(v)."""
        g = tuple(fp * a for a in self.g)
        h = tuple(
            fp * self.h[k] + fpp * self.g[i] * self.g[j]
            for k, (i, j) in enumerate(_PAIRS)
        )
        return D2(f, g, h)


def log(x: D2) -> D2:
    v = x.v
    return x._chain(math.log(v), 1.0 / v, -1.0 / (v * v))


def log1p(x: D2) -> D2:
    v = x.v
    d = 1.0 / (1.0 + v)
    return x._chain(math.log1p(v), d, -d * d)


def hessian_matrix(x: D2) -> list[list[float]]:
    h = x.h
    return [
        [h[0], h[1], h[2]],
        [h[1], h[3], h[4]],
        [h[2], h[4], h[5]],
    ]

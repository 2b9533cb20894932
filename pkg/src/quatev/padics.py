"""Finite-precision p-adic integers, valuations, Newton polygons, Hensel roots.

A PadicApprox is an element of Z_p known modulo p^M.  Arithmetic follows the
usual interval rules and never silently gains precision.  The valuation of a
representative that is 0 mod p^M is the sentinel INF, never a large finite
number, so that polygons built downstream cannot acquire fake slopes.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exact import INF, val_int


class PrecisionError(ArithmeticError):
    pass


class PadicApprox:
    """An element of Z_p known mod p^M, canonical representative in [0, p^M)."""

    __slots__ = ("p", "value", "prec")

    def __init__(self, p: int, value: int, prec: int):
        if prec < 0:
            raise PrecisionError(f"negative precision {prec}")
        self.p = p
        self.prec = prec
        self.value = value % (p**prec) if prec > 0 else 0

    @classmethod
    def from_rational(cls, x, p: int, prec: int) -> "PadicApprox":
        x = Fraction(x)
        mod = p**prec
        if val_int(x.denominator, p) > 0:
            raise ValueError(f"{x} is not a p-adic integer at p={p}")
        return cls(p, x.numerator * pow(x.denominator, -1, mod) % mod, prec)

    @property
    def valuation(self):
        """Exact valuation if determinable at this precision, else INF."""
        return valuation(self)

    def is_zero_at_precision(self) -> bool:
        return self.value % (self.p**self.prec) == 0 if self.prec > 0 else True

    def _check(self, other: "PadicApprox"):
        if self.p != other.p:
            raise ValueError("mixed primes")

    def __add__(self, other):
        if isinstance(other, int):
            other = PadicApprox(self.p, other, self.prec)
        self._check(other)
        m = min(self.prec, other.prec)
        return PadicApprox(self.p, self.value + other.value, m)

    __radd__ = __add__

    def __neg__(self):
        return PadicApprox(self.p, -self.value, self.prec)

    def __sub__(self, other):
        return self + (-other if isinstance(other, PadicApprox) else -other)

    def __mul__(self, other):
        if isinstance(other, int):
            if other == 0:
                return PadicApprox(self.p, 0, self.prec)
            return PadicApprox(self.p, self.value * other, self.prec + int(val_int(other, self.p)))
        self._check(other)
        va, vb = valuation(self), valuation(other)
        va = int(va) if va is not INF else self.prec
        vb = int(vb) if vb is not INF else other.prec
        m = min(self.prec + vb, other.prec + va, self.prec + other.prec)
        return PadicApprox(self.p, self.value * other.value, m)

    __rmul__ = __mul__

    def unit_inverse(self) -> "PadicApprox":
        if valuation(self) != 0:
            raise ValueError("inverse requires a unit")
        mod = self.p**self.prec
        return PadicApprox(self.p, pow(self.value, -1, mod), self.prec)

    def shift(self, k: int) -> "PadicApprox":
        """Multiply by p^k.  For k < 0 the value must be divisible by p^(-k)."""
        if k >= 0:
            return PadicApprox(self.p, self.value * self.p**k, self.prec + k)
        v = valuation(self)
        if v is INF:
            if self.prec + k < 0:
                raise PrecisionError("shift below zero precision")
            return PadicApprox(self.p, 0, self.prec + k)
        if v < -k:
            raise ValueError("not divisible")
        return PadicApprox(self.p, self.value // self.p ** (-k), self.prec + k)

    def same_element(self, other: "PadicApprox") -> bool:
        """Agreement at the common precision."""
        self._check(other)
        m = min(self.prec, other.prec)
        return (self.value - other.value) % self.p**m == 0

    def __repr__(self):
        return f"{self.value} + O({self.p}^{self.prec})"


def valuation(x: PadicApprox):
    """Exact p-adic valuation when determinable at precision M, else INF.

    For a nonzero representative the result lies in [0, M).
    """
    if x.prec == 0 or x.value % (x.p**x.prec) == 0:
        return INF
    return val_int(x.value, x.p)


# -- Newton polygons --------------------------------------------------------


@dataclass(frozen=True)
class NewtonPolygon:
    """Lower convex hull of (index, valuation) points.

    vertices: hull vertices, indices increasing.
    slopes:   list of (slope, multiplicity), slopes strictly increasing;
              multiplicities are the horizontal segment lengths.
    """

    vertices: tuple
    slopes: tuple

    def slope_multiset(self) -> list:
        out = []
        for s, m in self.slopes:
            out.extend([s] * m)
        return out

    def total_rise(self) -> Fraction:
        if len(self.vertices) < 2:
            return Fraction(0)
        return Fraction(self.vertices[-1][1] - self.vertices[0][1])

    def count_slope_le(self, h: Fraction) -> int:
        return sum(m for s, m in self.slopes if s <= h)


def newton_polygon(points) -> NewtonPolygon:
    """Lower convex hull of the given (index, valuation) points.

    Indices must be strictly increasing; points with valuation INF are
    skipped.  Raises ValueError("no finite points") when nothing remains.
    """
    finite = []
    last = None
    for i, v in points:
        if last is not None and i <= last:
            raise ValueError("indices must be strictly increasing")
        last = i
        if v is INF or v == INF:
            continue
        finite.append((int(i), Fraction(v)))
    if not finite:
        raise ValueError("no finite points")
    hull = []
    for pt in finite:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # keep only left turns strictly below: drop hull[-1] if it lies
            # on or above the segment hull[-2] -> pt
            if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    slopes = []
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        s = Fraction(y2 - y1, x2 - x1)
        if slopes and slopes[-1][0] == s:
            slopes[-1] = (s, slopes[-1][1] + (x2 - x1))
        else:
            slopes.append((s, x2 - x1))
    return NewtonPolygon(tuple(hull), tuple((s, m) for s, m in slopes))


# -- Hensel lifting ----------------------------------------------------------


def hensel_sqrt(a: int, p: int, prec: int) -> PadicApprox:
    """x with x^2 = a mod p^prec, for a a quadratic-residue unit mod odd p.

    The branch is pinned: x mod p lies in [1, (p-1)/2].
    """
    if p == 2 or p < 2:
        raise ValueError("p must be an odd prime")
    a0 = a % p
    if a0 == 0 or pow(a0, (p - 1) // 2, p) != 1:
        raise ValueError("no square root")
    from .exact import padic_sqrt_unit

    x = padic_sqrt_unit(Fraction(a), p, prec)
    return PadicApprox(p, x, prec)

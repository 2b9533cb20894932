"""Exact scalars: rationals and quadratic extensions Q(sqrt(d)).

Everything downstream (Hecke eigenvalues, Satake parameters, refinement
values) must be exact, so floats are banned.  A scalar is either a
``fractions.Fraction`` or a ``QuadExt`` element x + y*sqrt(d) with d a
squarefree integer.  Construction folds square factors of d into y and
degenerates to a plain Fraction when the irrational part vanishes.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt

INF = float("inf")


def squarefree_split(n: int) -> tuple[int, int]:
    """Write n = s^2 * d with d squarefree.  Returns (s, d).  n may be negative."""
    if n == 0:
        return 1, 0
    sign = -1 if n < 0 else 1
    n = abs(n)
    s, d = 1, 1
    f = 2
    while f * f <= n:
        e = 0
        while n % f == 0:
            n //= f
            e += 1
        s *= f ** (e // 2)
        if e % 2:
            d *= f
        f += 1 if f == 2 else 2
    d *= n
    return s, sign * d


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"expected rational, got {type(x).__name__}")


class QuadExt:
    """x + y*sqrt(d), with x, y rational and d squarefree, d not in {0, 1}."""

    __slots__ = ("x", "y", "d")

    def __new__(cls, x, y=0, d=1):
        x = _as_fraction(x)
        y = _as_fraction(y)
        if y != 0 and d != 0:
            s, d0 = squarefree_split(d)
            y *= s
            d = d0
        if y == 0 or d == 0:
            return x
        if d == 1:
            return x + y
        self = object.__new__(cls)
        self.x, self.y, self.d = x, y, d
        return self

    # -- ring operations ---------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, QuadExt):
            if other.d != self.d:
                raise ValueError(f"incompatible extensions sqrt({self.d}), sqrt({other.d})")
            return other.x, other.y
        return _as_fraction(other), Fraction(0)

    def __add__(self, other):
        ox, oy = self._coerce(other)
        return QuadExt(self.x + ox, self.y + oy, self.d)

    __radd__ = __add__

    def __neg__(self):
        return QuadExt(-self.x, -self.y, self.d)

    def __sub__(self, other):
        return self + (-other if isinstance(other, QuadExt) else -_as_fraction(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        ox, oy = self._coerce(other)
        return QuadExt(self.x * ox + self.y * oy * self.d, self.x * oy + self.y * ox, self.d)

    __rmul__ = __mul__

    def conjugate(self) -> "QuadExt":
        return QuadExt(self.x, -self.y, self.d)

    def norm(self) -> Fraction:
        return self.x * self.x - self.d * self.y * self.y

    def inverse(self):
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("zero element of quadratic extension")
        return QuadExt(self.x / n, -self.y / n, self.d)

    def __truediv__(self, other):
        if isinstance(other, QuadExt):
            return self * other.inverse()
        o = _as_fraction(other)
        return QuadExt(self.x / o, self.y / o, self.d)

    def __rtruediv__(self, other):
        return _as_fraction(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result, base = Fraction(1), self
        while n:
            if n & 1:
                result = base * result
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, QuadExt):
            return self.d == other.d and self.x == other.x and self.y == other.y
        if isinstance(other, (int, Fraction)):
            return False  # nonzero irrational part by construction
        return NotImplemented

    def __hash__(self):
        return hash((self.x, self.y, self.d))

    def __repr__(self):
        return f"({self.x}+{self.y}*sqrt({self.d}))"


Scalar = Fraction | int | QuadExt


def sc(x) -> Scalar:
    """Normalize ints to Fraction; pass QuadExt through."""
    if isinstance(x, QuadExt):
        return x
    return _as_fraction(x)


def sc_conj(x) -> Scalar:
    return x.conjugate() if isinstance(x, QuadExt) else _as_fraction(x)


# -- exact p-adic valuations ----------------------------------------------


def val_int(n: int, p: int):
    """v_p(n) for an integer, INF for 0."""
    if n == 0:
        return INF
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def val_fraction(x: Fraction, p: int):
    x = _as_fraction(x)
    if x == 0:
        return INF
    return Fraction(val_int(x.numerator, p) - val_int(x.denominator, p))


def is_padic_square(x: Fraction, p: int) -> bool:
    """Whether a nonzero rational is a square in Q_p."""
    x = _as_fraction(x)
    if x == 0:
        raise ValueError("zero input")
    v = val_fraction(x, p)
    if v % 2 != 0:
        return False
    u = x / Fraction(p) ** int(v)
    a = u.numerator * pow(u.denominator, -1, p**3 if p == 2 else p) % (8 if p == 2 else p)
    if p == 2:
        return a % 8 == 1
    return pow(a, (p - 1) // 2, p) == 1


def _sqrt_mod_prime(a: int, p: int) -> int:
    """A square root of a mod an odd prime p (a a QR unit).  Tonelli-Shanks."""
    a %= p
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    # Tonelli-Shanks
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return r


def padic_sqrt_unit(u: Fraction, p: int, prec: int) -> int:
    """The pinned square root of a unit square u in Z_p, as an integer mod p^prec.

    Branch convention (our fixed embedding into Qbar_p): for odd p the root
    whose residue mod p lies in [1, (p-1)/2]; for p = 2 the root = 1 mod 4.
    """
    mod = p**prec
    a = u.numerator * pow(u.denominator, -1, mod) % mod
    if p == 2:
        if a % 8 != 1:
            raise ValueError("not a 2-adic square")
        # lift x^2 = a one bit at a time; incrementing by 2^(k-1) >= 4 keeps x = 1 mod 4
        x = 1
        for k in range(3, prec):
            if (x * x - a) % (1 << (k + 1)):
                x += 1 << (k - 1)
        return x % mod
    r0 = _sqrt_mod_prime(a % p, p)
    if not (1 <= r0 <= (p - 1) // 2):
        r0 = p - r0
    x, k = r0, 1
    while k < prec:
        k = min(2 * k, prec)
        m = p**k
        x = (x - (x * x - a) * pow(2 * x, -1, m)) % m
    return x % mod


def val_scalar(z: Scalar, p: int):
    """Exact p-adic valuation of a scalar, under the pinned embedding.

    For x + y*sqrt(d) with d not a square in Q_p this is v_p(norm)/2, which
    is embedding-independent.  When d is a p-adic square the two embeddings
    can differ; we use the pinned branch of padic_sqrt_unit.
    """
    if not isinstance(z, QuadExt):
        return val_fraction(_as_fraction(z), p)
    x, y, d = z.x, z.y, z.d
    if not is_padic_square(Fraction(d), p):
        # non-split: valuation is Galois-invariant, so v = v_p(N(z)) / 2
        return val_fraction(z.norm(), p) / 2
    # split: evaluate under the pinned embedding at increasing precision.
    # x + y*r differs from the true image by y*(sqrt(d) - r), of valuation
    # >= v(y) + prec, so the computed valuation is exact once below that.
    vy = val_fraction(y, p)
    prec = 8
    while prec <= 4096:
        r = padic_sqrt_unit(Fraction(d), p, prec)
        v = val_fraction(x + y * r, p)
        if v < vy + prec:
            return v
        prec *= 2
    raise ArithmeticError("valuation did not stabilize under the pinned embedding")


def scalar_to_str(z: Scalar) -> str:
    if isinstance(z, QuadExt):
        return f"{z.x}+{z.y}*sqrt({z.d})"
    return str(_as_fraction(z))


def scalar_from_str(s: str) -> Scalar:
    s = s.strip()
    if "sqrt" in s:
        left, right = s.split("*sqrt(")
        x_str, y_str = left.rsplit("+", 1)
        d = int(right.rstrip(")"))
        return QuadExt(Fraction(x_str), Fraction(y_str), d)
    return Fraction(s)

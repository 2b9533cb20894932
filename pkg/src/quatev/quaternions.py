"""Definite quaternion algebras over Q: maximal orders, norm-form enumeration,
unit groups, p-adic splittings, and Hecke operators on algebraic weights.

The catalog covers the class-number-one discriminants D in {2, 3, 5, 7, 13}
with hardcoded maximal-order bases (re-derivable by lattice saturation, see
the tests).  With one ideal class, automorphic forms of weight (k1, k2)
collapse to the invariants of Sym^{k1-k2} tensor det^{k2} under the norm-one
unit group, so Hecke eigensystems are exactly computable: T_l sums the
norm-l elements modulo left unit multiplication, and S_l acts by the central
scalar l^{k1+k2} (equal to 1 at weight (0, 0), which anchors the
normalization).
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import permutations
from math import gcd, isqrt

from . import linalg
from .exact import INF, QuadExt, is_padic_square, padic_sqrt_unit, val_fraction, val_int

Quat = tuple  # (x0, x1, x2, x3): coefficients of 1, i, j, k as Fractions


def legendre(a: int, p: int) -> int:
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def hilbert_symbol(a: int, b: int, v) -> int:
    """Hilbert symbol (a, b)_v, v a prime or 'inf'."""
    if a == 0 or b == 0:
        raise ValueError("arguments must be nonzero")
    if v == "inf":
        return -1 if (a < 0 and b < 0) else 1
    p = v
    va, vb = int(val_int(abs(a), p)), int(val_int(abs(b), p))
    u, w = a // p**va, b // p**vb
    if p != 2:
        res = (-1) ** (va * vb * ((p - 1) // 2)) * legendre(u, p) ** vb * legendre(w, p) ** va
        return 1 if res == 1 else -1
    e = ((u - 1) // 2) * ((w - 1) // 2) + va * ((w * w - 1) // 8) + vb * ((u * u - 1) // 8)
    return -1 if e % 2 else 1


def ramified_set(a: int, b: int) -> list:
    """Ramified places of the algebra (a, b): finite primes, plus 'inf'."""
    primes = {2}
    for n in (a, b):
        n = abs(n)
        f = 2
        while f * f <= n:
            if n % f == 0:
                primes.add(f)
                while n % f == 0:
                    n //= f
            f += 1
        if n > 1:
            primes.add(n)
    out = [p for p in sorted(primes) if hilbert_symbol(a, b, p) == -1]
    if hilbert_symbol(a, b, "inf") == -1:
        out.append("inf")
    return out


@dataclass(frozen=True)
class QuaternionAlgebra:
    """(a, b | Q) with i^2 = a, j^2 = b, ij = -ji = k.  Must be definite,
    and the declared discriminant must match the Hilbert-symbol computation."""

    a: int
    b: int
    disc: int

    def __post_init__(self):
        if self.a >= 0 or self.b >= 0:
            raise ValueError("definite algebra needs a < 0 and b < 0")
        ram = ramified_set(self.a, self.b)
        if "inf" not in ram:
            raise ValueError("algebra not ramified at infinity")
        prod = 1
        for p in ram:
            if p != "inf":
                prod *= p
        if prod != self.disc:
            raise ValueError(f"computed discriminant {prod} != declared {self.disc}")

    @property
    def ramified_primes(self) -> list[int]:
        return [p for p in ramified_set(self.a, self.b) if p != "inf"]

    def mul(self, x: Quat, y: Quat) -> Quat:
        a, b = self.a, self.b
        x0, x1, x2, x3 = x
        y0, y1, y2, y3 = y
        return (
            x0 * y0 + a * x1 * y1 + b * x2 * y2 - a * b * x3 * y3,
            x0 * y1 + x1 * y0 - b * x2 * y3 + b * x3 * y2,
            x0 * y2 + x2 * y0 + a * x1 * y3 - a * x3 * y1,
            x0 * y3 + x3 * y0 + x1 * y2 - x2 * y1,
        )

    def conj(self, x: Quat) -> Quat:
        return (x[0], -x[1], -x[2], -x[3])

    def nrd(self, x: Quat) -> Fraction:
        return x[0] ** 2 - self.a * x[1] ** 2 - self.b * x[2] ** 2 + self.a * self.b * x[3] ** 2

    def trd(self, x: Quat) -> Fraction:
        return 2 * x[0]


def _frac_row(parts) -> Quat:
    return tuple(Fraction(x) for x in parts)


class MaximalOrder:
    """An order given by a 4-element basis (rational combinations of 1,i,j,k).

    Ring closure, the reduced discriminant, and unit-group closure are
    verified in the test suite rather than at construction time.
    """

    def __init__(self, algebra: QuaternionAlgebra, basis):
        self.algebra = algebra
        self.basis = [_frac_row(e) for e in basis]
        if len(self.basis) != 4:
            raise ValueError("order basis must have 4 elements")
        self._basis_inv = linalg.mat_inv([list(e) for e in self.basis])

    def coords(self, x: Quat):
        return [sum(self._basis_inv[j][i] * x[j] for j in range(4)) for i in range(4)]

    def contains(self, x: Quat) -> bool:
        return all(c.denominator == 1 for c in self.coords(x))

    def element(self, coeffs) -> Quat:
        out = (Fraction(0),) * 4
        for c, e in zip(coeffs, self.basis):
            out = tuple(o + Fraction(c) * ei for o, ei in zip(out, e))
        return out

    def gram(self):
        """G[i][j] = trd(e_i conj(e_j)); then nrd(sum c_i e_i) = c^T G c / 2."""
        A = self.algebra
        return [[A.trd(A.mul(ei, A.conj(ej))) for ej in self.basis] for ei in self.basis]

    def reduced_discriminant(self) -> int:
        A = self.algebra
        M = [[A.trd(A.mul(ei, ej)) for ej in self.basis] for ei in self.basis]
        d = _det4(M)
        num = abs(int(d))
        r = isqrt(num)
        if r * r != num:
            raise ArithmeticError("discriminant is not a perfect square")
        return r

    @property
    def units(self) -> list[Quat]:
        """All elements of reduced norm 1."""
        if not hasattr(self, "_units"):
            self._units = enumerate_norm(self, 1)
        return self._units


def _det4(M):
    total = Fraction(0)
    for perm in permutations(range(4)):
        inv = sum(1 for i in range(4) for j in range(i + 1, 4) if perm[i] > perm[j])
        prod = Fraction(1)
        for i in range(4):
            prod *= M[i][perm[i]]
        total += -prod if inv % 2 else prod
    return total


# -- norm-form enumeration --------------------------------------------------------


def _ldl(G):
    """Exact LDL^T of a symmetric positive-definite rational matrix."""
    n = len(G)
    L = [[Fraction(1) if i == j else Fraction(0) for j in range(n)] for i in range(n)]
    D = [Fraction(0)] * n
    A = [[Fraction(x) for x in row] for row in G]
    for j in range(n):
        D[j] = A[j][j] - sum(D[k] * L[j][k] ** 2 for k in range(j))
        if D[j] <= 0:
            raise ArithmeticError("norm form not positive definite")
        for i in range(j + 1, n):
            L[i][j] = (A[i][j] - sum(D[k] * L[i][k] * L[j][k] for k in range(j))) / D[j]
    return L, D


def _floor_sqrt_frac(x: Fraction) -> int:
    if x < 0:
        return -1
    return isqrt(x.numerator * x.denominator) // x.denominator


def enumerate_norm(order: MaximalOrder, n: int) -> list[Quat]:
    """The complete list of order elements of reduced norm n, by exhaustive
    search in the rank-4 positive-definite norm lattice."""
    if n < 1:
        raise ValueError("n must be >= 1")
    Q = [[Fraction(g, 2) for g in row] for row in order.gram()]
    L, D = _ldl(Q)
    out = []
    c = [0, 0, 0, 0]

    def rec(i, remaining):
        offset = sum(L[j][i] * c[j] for j in range(i + 1, 4))
        r = _floor_sqrt_frac(remaining / D[i])
        center = -offset
        lo = (center.numerator // center.denominator) - r - 1
        hi = lo + 2 * r + 3
        for ci in range(lo, hi + 1):
            val = D[i] * (ci + offset) ** 2
            if val <= remaining:
                c[i] = ci
                if i == 0:
                    if val == remaining:
                        out.append(order.element(list(c)))
                else:
                    rec(i - 1, remaining - val)
        c[i] = 0

    rec(3, Fraction(n))
    A = order.algebra
    result = sorted(x for x in out if A.nrd(x) == n)
    return result


def left_unit_classes(order: MaximalOrder, n: int) -> list[Quat]:
    """Representatives of {x : nrd x = n} modulo left unit multiplication;
    canonical representative = lexicographically smallest orbit element."""
    A = order.algebra
    elements = enumerate_norm(order, n)
    element_set = set(elements)
    reps, seen = [], set()
    for x in elements:
        if x in seen:
            continue
        orbit = [A.mul(u, x) for u in order.units]
        assert all(y in element_set for y in orbit), "unit orbit leaves the norm sphere"
        seen.update(orbit)
        reps.append(min(orbit))
    return reps


# -- catalog ----------------------------------------------------------------------

_DATA = os.path.join(os.path.dirname(__file__), "data", "orders.txt")


@lru_cache(maxsize=None)
def catalog() -> dict[int, MaximalOrder]:
    """Class-number-one catalog, keyed by discriminant."""
    orders = {}
    with open(_DATA, encoding="utf-8") as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            fields = dict(tok.split("=", 1) for tok in line.split(";"))
            D = int(fields["D"])
            alg = QuaternionAlgebra(int(fields["a"]), int(fields["b"]), D)
            basis = [[Fraction(x) for x in vec.split(",")] for vec in fields["basis"].split("|")]
            orders[D] = MaximalOrder(alg, basis)
    return orders


def get_order(D: int) -> MaximalOrder:
    try:
        return catalog()[D]
    except KeyError:
        raise ValueError(f"outside catalog: discriminant {D}") from None


# -- lattice saturation (derives the catalog; kept for verification) ---------------


def _integer_row_basis(M):
    """Triangular Z-basis of the row span of integer vectors (length 4)."""
    M = [list(r) for r in M if any(r)]
    basis = []
    for col in range(4):
        active = [r for r in M if r[col] != 0]
        M = [r for r in M if r[col] == 0]
        while len(active) > 1:
            active.sort(key=lambda r: abs(r[col]))
            piv = active[0]
            nxt = [piv]
            for r in active[1:]:
                q = r[col] // piv[col]
                rr = [x - q * y for x, y in zip(r, piv)]
                if rr[col] != 0:
                    nxt.append(rr)
                elif any(rr):
                    M.append(rr)
            active = nxt
        if active:
            piv = active[0]
            if piv[col] < 0:
                piv = [-x for x in piv]
            basis.append(piv)
    if len(basis) != 4:
        raise ArithmeticError("rows do not span a full lattice")
    return basis


def _lattice_basis(rows):
    den = 1
    for row in rows:
        for x in row:
            den = den * x.denominator // gcd(den, x.denominator)
    ints = [[int(x * den) for x in row] for row in rows]
    return [[Fraction(x, den) for x in row] for row in _integer_row_basis(ints)]


def order_closure(algebra: QuaternionAlgebra, gens) -> list[Quat]:
    """Smallest multiplicatively closed lattice containing 1 and the
    generators (as a lattice basis)."""
    basis = _lattice_basis([list(g) for g in gens] + [[Fraction(1), Fraction(0), Fraction(0), Fraction(0)]])
    while True:
        quats = [tuple(row) for row in basis]
        inv = linalg.mat_inv([list(q) for q in quats])
        extra = []
        for x in quats:
            for y in quats:
                prod = algebra.mul(x, y)
                coords = [sum(inv[j][i] * prod[j] for j in range(4)) for i in range(4)]
                if not all(c.denominator == 1 for c in coords):
                    extra.append(list(prod))
        if not extra:
            return quats
        basis = _lattice_basis([list(q) for q in quats] + extra)


def saturate_to_maximal(algebra: QuaternionAlgebra) -> MaximalOrder:
    """Grow <1, i, j, k> to a maximal order by adjoining integral elements
    with denominators 2 and 4 while the reduced discriminant exceeds the
    algebra discriminant.  Desk-scale; intended for the catalog algebras."""
    basis = [_frac_row(b) for b in ((1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1))]
    current = MaximalOrder(algebra, basis)
    while current.reduced_discriminant() > algebra.disc:
        found = False
        for denom in (2, 4):
            for mask in range(1, denom**4):
                coeffs, mm = [], mask
                for _ in range(4):
                    coeffs.append(mm % denom)
                    mm //= denom
                x = current.element([Fraction(cc, denom) for cc in coeffs])
                if current.contains(x):
                    continue
                if algebra.trd(x).denominator != 1 or algebra.nrd(x).denominator != 1:
                    continue
                try:
                    cand = MaximalOrder(algebra, order_closure(algebra, list(current.basis) + [x]))
                    rd = cand.reduced_discriminant()
                except ArithmeticError:
                    continue
                if rd < current.reduced_discriminant() and rd >= algebra.disc:
                    current, found = cand, True
                    break
            if found:
                break
        if not found:
            raise ArithmeticError("saturation stalled before reaching a maximal order")
    return current


# -- p-adic splitting ---------------------------------------------------------------


def _solve_norm_equation(a: int, b: int, p: int, prec: int):
    """(x, y) integers with x^2 - a y^2 = b in Z_p to precision prec (odd p)."""
    for x in range(0, 4 * p * p):
        w = Fraction(x * x - b, a)
        if w == 0:
            return (x, 0)
        v = val_fraction(w, p)
        if v == INF or int(v) % 2 != 0 or int(v) // 2 >= prec:
            continue
        u = w / Fraction(p) ** int(v)
        if not is_padic_square(u, p):
            continue
        root = padic_sqrt_unit(u, p, prec)
        return (x, root * p ** (int(v) // 2) % p**prec)
    raise ArithmeticError(f"norm equation x^2 - {a} y^2 = {b} unsolved at p={p}")


def _m2_mul(m1, m2, mod):
    (a, b), (c, d) = m1
    (e, f), (g, h) = m2
    return (
        ((a * e + b * g) % mod, (a * f + b * h) % mod),
        ((c * e + d * g) % mod, (c * f + d * h) % mod),
    )


def _m2_det(m, mod):
    return (m[0][0] * m[1][1] - m[0][1] * m[1][0]) % mod


class PSplitting:
    """Ring embedding of the order into 2x2 matrices over Z/p^M.

    sigma(i) = (0, 1; a, 0), sigma(j) = (x, y; -a y, -x) with x^2 - a y^2 = b.
    Basis images are integral because the catalog denominators are prime to p.
    """

    def __init__(self, order: MaximalOrder, p: int, prec: int):
        alg = order.algebra
        if p in alg.ramified_primes:
            raise ValueError("p ramified")
        if p == 2:
            raise NotImplementedError("splitting at p = 2 not supported")
        self.order = order
        self.p = p
        self.prec = prec
        mod = p**prec
        x, y = _solve_norm_equation(alg.a, alg.b, p, prec)
        si = ((0, 1), (alg.a % mod, 0))
        sj = ((x % mod, y % mod), ((-alg.a * y) % mod, (-x) % mod))
        self._gens = (si, sj, _m2_mul(si, sj, mod))

    def mat(self, xq: Quat):
        """Image of a quaternion (coordinates in 1, i, j, k) mod p^M."""
        mod = self.p**self.prec
        out = [[0, 0], [0, 0]]
        mats = (((1, 0), (0, 1)),) + self._gens
        for coeff, m in zip(xq, mats):
            c = Fraction(coeff)
            cm = c.numerator * pow(c.denominator, -1, mod) % mod
            for r in range(2):
                for s in range(2):
                    out[r][s] = (out[r][s] + cm * m[r][s]) % mod
        return ((out[0][0], out[0][1]), (out[1][0], out[1][1]))


def split_at_p(order: MaximalOrder, p: int, prec: int) -> PSplitting:
    return PSplitting(order, p, prec)


def exact_split(algebra: QuaternionAlgebra):
    """2x2 images of (1, i, j, k) over the exact field Q(sqrt(a))."""
    s = QuadExt(0, 1, algebra.a)
    zero, one = Fraction(0), Fraction(1)
    ident = [[one, zero], [zero, one]]
    si = [[s, zero], [zero, -s]]
    sj = [[zero, one], [Fraction(algebra.b), zero]]
    sk = linalg.mat_mul(si, sj)
    return [ident, si, sj, sk]


def exact_mat(algebra: QuaternionAlgebra, xq: Quat):
    gens = exact_split(algebra)
    out = [[Fraction(0), Fraction(0)], [Fraction(0), Fraction(0)]]
    for coeff, m in zip(xq, gens):
        for r in range(2):
            for s in range(2):
                out[r][s] = out[r][s] + Fraction(coeff) * m[r][s]
    return out


# -- weight representations and Hecke matrices ---------------------------------------


def _poly_mul_power(poly, u, v, e):
    """Multiply a {Y-degree: coeff} homogeneous polynomial by (X u + Y v)^e."""
    for _ in range(e):
        new = {}
        for deg, c in poly.items():
            new[deg] = new.get(deg, 0) + c * u
            new[deg + 1] = new.get(deg + 1, 0) + c * v
        poly = new
    return poly


def sym_power_matrix(g, m: int, det_power: int = 0):
    """Matrix of Sym^m (tensor det^det_power) of a 2x2 matrix on the basis
    X^{m-s} Y^s, for the right row action (X, Y) -> (X, Y) g."""
    A, B = g[0][0], g[0][1]
    C, D = g[1][0], g[1][1]
    one = A * 0 + 1
    det = A * D - B * C
    cols = []
    for s in range(m + 1):
        poly = _poly_mul_power({0: one}, A, C, m - s)
        poly = _poly_mul_power(poly, B, D, s)
        cols.append(poly)
    scale = det**det_power if det_power else None
    out = []
    for r in range(m + 1):
        row = []
        for s in range(m + 1):
            val = cols[s].get(r, 0 * one)
            if scale is not None:
                val = val * scale
            row.append(val)
        out.append(row)
    return out


def hecke_matrix(order: MaximalOrder, weight: tuple[int, int], l: int):
    """(matrix of T_l on the unit-invariant subspace, s_l normalization).

    T_l = sum over norm-l elements mod left units acting through
    Sym^{k1-k2} tensor det^{k2}; s_l = l^{k1+k2}.
    """
    alg = order.algebra
    k1, k2 = weight
    if k1 < k2:
        raise ValueError("require k1 >= k2")
    if l in alg.ramified_primes:
        raise ValueError(f"l = {l} is ramified")
    if alg.disc not in catalog():
        raise ValueError("outside catalog")
    m = k1 - k2
    s_l = Fraction(l) ** (k1 + k2)

    def rho(x):
        return sym_power_matrix(exact_mat(alg, x), m, det_power=k2)

    units = order.units
    P = None
    for u in units:
        mu = rho(u)
        P = mu if P is None else linalg.mat_add(P, mu)
    P = linalg.mat_scale(P, Fraction(1, len(units)))
    basis = linalg.column_space_basis(P)
    if not basis:
        return [], s_l
    T_full = None
    for x in left_unit_classes(order, l):
        mx = rho(x)
        T_full = mx if T_full is None else linalg.mat_add(T_full, mx)
    Bmat = [[basis[j][i] for j in range(len(basis))] for i in range(m + 1)]
    cols = [linalg.solve_exact(Bmat, linalg.mat_vec(T_full, bvec)) for bvec in basis]
    return [[cols[j][i] for j in range(len(basis))] for i in range(len(basis))], s_l


# -- U_p coset data -------------------------------------------------------------------


def _hnf_det_p(A, p: int):
    """Left-GL2(Z_p) Hermite form of a matrix of determinant p: either
    (p, 0; c, 1) with c in {0..p-1} or (1, 0; 0, p)."""
    (a, b), (c, d) = A
    if d % p != 0:
        return ((p, 0), (c * pow(d, -1, p) % p, 1))
    if b % p != 0:
        return ((p, 0), (a * pow(b, -1, p) % p, 1))
    return ((1, 0), (0, p))


def up_coset_data(order: MaximalOrder, p: int, splitting: PSplitting):
    """Normal forms of the norm-p left-unit classes: p contracting matrices
    (p, 0; c, 1), c in {0..p-1}, and one matrix (1, 0; 0, p).

    Raises "coset reduction failed" when the forms are not p+1 and distinct
    (symptom of insufficient splitting precision)."""
    forms = [_hnf_det_p(splitting.mat(x), p) for x in left_unit_classes(order, p)]
    if len(set(forms)) != p + 1 or len(forms) != p + 1:
        raise ArithmeticError("coset reduction failed")
    return sorted(forms)


def up_contracting_reps(order: MaximalOrder, p: int, splitting: PSplitting):
    """The p norm-p class representatives, each normalized by a left unit so
    that its splitting image B has B[0][1] = 0 mod p and unit B[1][1]; such a
    B acts on analytic functions by z -> (az + c)/(bz + d), contracting Z_p
    into c/d + p Z_p."""
    alg = order.algebra
    out = []
    for x in left_unit_classes(order, p):
        for u in order.units:
            B = splitting.mat(alg.mul(u, x))
            if B[0][1] % p == 0 and B[1][1] % p != 0:
                out.append(B)
                break
    if len(out) != p:
        raise ArithmeticError(f"expected {p} contracting classes, found {len(out)}")
    return out

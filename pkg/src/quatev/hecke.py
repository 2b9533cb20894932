"""The unramified and Atkin-Lehner Hecke data and the eigenvalue-level transfer.

At a good prime l the unramified Hecke algebra of GL2 is generated by T_l and
the invertible central S_l.  On the norm-one side the algebra is generated by
a single element h_l whose image is (T_l^2 - 2 l S_l) S_l^{-1}, so a system of
eigenvalues (t_l, s_l) transfers to a_l = (t_l^2 - 2 l s_l) / s_l.  At p the
relevant algebra is the monoid algebra on U_p, S_p with U_{p^2} = U_p^2 and
u_0 = S_p U_{p^2}.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exact import QuadExt, Scalar, sc, squarefree_split


@dataclass(frozen=True)
class UnramifiedEigenPair:
    """Eigenvalues (t_l, s_l) of T_l and S_l; s_l must be invertible."""

    l: int
    t: Scalar
    s: Scalar

    def __post_init__(self):
        object.__setattr__(self, "t", sc(self.t))
        object.__setattr__(self, "s", sc(self.s))
        if self.s == 0:
            raise ValueError("S_l not invertible")


def lambda_unramified(pair: UnramifiedEigenPair) -> Scalar:
    """Transferred eigenvalue a_l = (t_l^2 - 2 l s_l) / s_l."""
    if pair.s == 0:
        raise ValueError("S_l not invertible")
    return (pair.t * pair.t - 2 * pair.l * pair.s) / pair.s


@dataclass(frozen=True)
class SatakeParams:
    """Unordered Satake parameter pair {alpha, beta} at l.

    The pair consists of the roots of X^2 - (t_l/sqrt(l)) X + s_l, stored
    through (l, t, s) and the discriminant data; alpha*beta = s and
    sqrt(l)*(alpha+beta) = t hold exactly.
    """

    l: int
    t: Scalar
    s: Scalar

    @property
    def disc(self) -> Scalar:
        return self.t * self.t - 4 * self.l * self.s

    def ratio(self) -> Scalar:
        """beta/alpha = (t^2 - 2ls - t*sqrt(D)) / (2ls), D = t^2 - 4ls."""
        t, s, l = self.t, self.s, self.l
        if not isinstance(t, Fraction) or not isinstance(s, Fraction):
            raise NotImplementedError("ratio supported for rational (t, s)")
        rad = _sqrt_of(self.disc)
        return (t * t - 2 * l * s - t * rad) / (2 * l * s)

    def roots_in_radical_form(self) -> tuple[Scalar, Scalar]:
        """(alpha, beta) = ((t +- sqrt(D)) / (2 sqrt(l))), as elements of
        Q(sqrt(l)) when D is a rational square, else unsupported."""
        rad = _sqrt_of(self.disc)
        if isinstance(rad, QuadExt):
            raise NotImplementedError("explicit roots need sqrt(D) rational")
        sl = QuadExt(0, 1, self.l)  # sqrt(l)
        alpha = (self.t + rad) / 2 / sl
        beta = (self.t - rad) / 2 / sl
        return alpha, beta

    def reconstruct(self) -> UnramifiedEigenPair:
        return UnramifiedEigenPair(self.l, self.t, self.s)


def _sqrt_of(x: Scalar) -> Scalar:
    """sqrt of a rational, exact: rational when x is a square, else in Q(sqrt(d))."""
    x = sc(x)
    if not isinstance(x, Fraction):
        raise NotImplementedError("nested radicals not supported")
    if x == 0:
        return Fraction(0)
    sn, dn = squarefree_split(x.numerator)
    sd, dd = squarefree_split(x.denominator)
    # x = (sn^2 dn)/(sd^2 dd); sqrt = (sn/sd) * sqrt(dn*dd) / dd
    return QuadExt(0, Fraction(sn, sd * dd), dn * dd)


def satake_params(pair: UnramifiedEigenPair) -> SatakeParams:
    return SatakeParams(pair.l, pair.t, pair.s)


def lambda_from_satake(params: SatakeParams) -> Scalar:
    """Independent route to a_l: l*(alpha/beta + beta/alpha), computed in the
    quadratic extension containing sqrt(disc)."""
    r = params.ratio()
    val = params.l * (r + 1 / r)
    assert not isinstance(val, QuadExt), "a_l must be rational"
    return val


@dataclass(frozen=True)
class AtkinLehnerChar:
    """A character of the Atkin-Lehner monoid algebra at p, determined by its
    values on the generators U_p and S_p (both must be nonzero).  The induced
    values on U_{p^2} and u_0 are U_p^2 and S_p * U_p^2."""

    p: int
    up_value: Scalar
    sp_value: Scalar

    def __post_init__(self):
        if self.up_value == 0 or self.sp_value == 0:
            raise ValueError("Atkin-Lehner character values must be nonzero")

    def up2_value(self) -> Scalar:
        return self.up_value * self.up_value

    def u0_value(self) -> Scalar:
        return self.sp_value * self.up2_value()


def lambda_atkin_lehner(char: AtkinLehnerChar) -> Scalar:
    """Value of the norm-one-side generator u_0 = S_p * U_{p^2} under the
    restriction along the monoid inclusion."""
    return char.u0_value()


def gamma_index(z: tuple[int, int], p: int) -> int:
    """|I / (I n z I z^-1)| for the diagonal monoid element with p-exponents
    z = (a1, a2), a1 <= a2.  Equals p^(a2 - a1); same count on the GL2 side."""
    a1, a2 = z
    if a1 > a2:
        raise ValueError("not in Sigma^+")
    return p ** (a2 - a1)

"""Weight spaces for the two groups, the contraction map between them, and
the analyticity level of a character.

The big weight space parametrizes continuous characters of (Z_p^*)^2, the
small one characters of Z_p^*; restriction along x -> (x, x^{-1}) sends the
algebraic weight (k1, k2) to k1 - k2.  Each space is a disjoint union of unit
disks indexed by characters of the torsion subgroup of Z_p^*.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil

from .exact import INF, val_int


@dataclass(frozen=True)
class AlgebraicWeightGL2:
    k1: int
    k2: int

    def __post_init__(self):
        if self.k1 < self.k2:
            raise ValueError("require k1 >= k2")


@dataclass(frozen=True)
class AlgebraicWeightSL2:
    k: int

    def __post_init__(self):
        if self.k < 0:
            raise ValueError("require k >= 0")


def mu(w: AlgebraicWeightGL2) -> AlgebraicWeightSL2:
    """Restrict (z1, z2) -> z1^k1 z2^k2 along x -> (x, x^{-1}): weight k1 - k2."""
    return AlgebraicWeightSL2(w.k1 - w.k2)


def mu_section(k: AlgebraicWeightSL2) -> AlgebraicWeightGL2:
    """A preimage of k under mu (mu is surjective on algebraic weights)."""
    return AlgebraicWeightGL2(k.k, 0)


@dataclass(frozen=True)
class WeightComponent:
    """Disk label: the restriction of the character to the torsion subgroup
    of Z_p^*, as exponent(s) of the torsion-injection character.  One label
    mod p-1 per factor for odd p, mod 2 for p = 2."""

    p: int
    labels: tuple

    @property
    def torsion_order(self) -> int:
        return 2 if self.p == 2 else self.p - 1


def component_of(weight, p: int) -> WeightComponent:
    q = 2 if p == 2 else p - 1
    if isinstance(weight, AlgebraicWeightGL2):
        return WeightComponent(p, (weight.k1 % q, weight.k2 % q))
    if isinstance(weight, AlgebraicWeightSL2):
        return WeightComponent(p, (weight.k % q,))
    if isinstance(weight, int):
        return WeightComponent(p, (weight % q,))
    raise TypeError(f"unsupported weight {weight!r}")


def contract_component(c: WeightComponent) -> WeightComponent:
    """Image of a two-variable disk label under restriction along x -> (x, x^{-1})."""
    if len(c.labels) != 2:
        raise ValueError("expected a two-variable component")
    q = c.torsion_order
    return WeightComponent(c.p, ((c.labels[0] - c.labels[1]) % q,))


@dataclass(frozen=True)
class CharacterData:
    """A continuous character of Z_p^* of first-class shape: algebraic part
    z -> z^k, times a finite-order part with wild (p-power) order wild_order
    and tame label tame_label (exponent of the torsion injection).

    Only what the analyticity-level computation needs is retained.
    """

    p: int
    k: int = 0
    wild_order: int = 1
    tame_label: int = 0

    def __post_init__(self):
        if self.wild_order != 1:
            if self.p == 2:
                raise NotImplementedError("wild part at p = 2 not supported")
            w = self.wild_order
            while w % self.p == 0:
                w //= self.p
            if w != 1:
                raise ValueError("wild_order must be a power of p")

    def is_trivial(self) -> bool:
        q = 2 if self.p == 2 else self.p - 1
        return self.k == 0 and self.wild_order == 1 and self.tame_label % q == 0


def _alg_level_valuation(k: int, p: int, level: int) -> Fraction:
    """v_p((1 + p^level)^k - 1), exact, INF for k = 0."""
    if k == 0:
        return INF
    k = abs(k)
    if p != 2:
        return Fraction(level + int(val_int(k, p)))
    if level >= 2:
        return Fraction(level + int(val_int(k, 2)))
    # level 1: v_2(3^k - 1) = 1 for odd k, 2 + v_2(k) for even k
    if k % 2 == 1:
        return Fraction(1)
    return Fraction(2 + int(val_int(k, 2)))


def k_of_disc(char: CharacterData, radius_valuation: Fraction | None = None) -> int:
    """Minimal level k' >= 0 on which the character (and every character of
    the surrounding disk, when radius_valuation is given) is analytic.

    The criterion at level k' >= 1 is v_p(kappa(1 + p^{k'}) - 1) > 1/(p-1);
    level 0 is reserved for the trivial character, the full unit group not
    being a disk.  radius_valuation r means the disk |w| <= p^{-r} around the
    character in the coordinate w = kappa(1+p) - 1; larger r (smaller disk)
    can only lower the answer.
    """
    p = char.p
    if char.is_trivial() and radius_valuation is None:
        return 0
    bound = Fraction(1, p - 1)
    wild_m = 0
    w = char.wild_order
    while w > 1:
        w //= p
        wild_m += 1
    for level in range(1, 64):
        vs = []
        v_alg = _alg_level_valuation(char.k, p, level)
        # wild torsion contributes a root of unity of order p^max(0, m-level+1)
        j = max(0, wild_m - (level - 1))
        if j > 0:
            vs.append(Fraction(1, p ** (j - 1) * (p - 1)))
            if v_alg is not INF:
                # distinct valuations (one < 1, one >= 1): ultrametric min
                vs.append(v_alg)
            v = min(vs)
        else:
            v = v_alg
        if radius_valuation is not None:
            v = min(v, _disk_level_valuation(Fraction(radius_valuation), p, level))
        if v > bound:
            return level
    raise ArithmeticError("no analyticity level below 64")


def _disk_level_valuation(r: Fraction, p: int, level: int) -> Fraction:
    """Guaranteed lower bound for v_p(kappa(1+p^{level}) - 1) over the disk of
    coordinate-valuation >= r, by iterating the p-power step map.  The step at
    the boundary 1/(p-1) is left in place (no certifiable increase)."""
    bound = Fraction(1, p - 1)
    t = Fraction(r)
    for _ in range(level - 1):
        if t > bound:
            t = t + 1
        elif t < bound:
            t = p * t
    return t


def nested_cover_index(radius_valuation: Fraction) -> int:
    """Index of the smallest closed-disk cover member (radius p^{-1/i})
    containing a disk of radius p^{-r}: minimal i with 1/i <= r."""
    r = Fraction(radius_valuation)
    if r <= 0:
        raise ValueError("radius valuation must be positive")
    return max(1, ceil(Fraction(1) / r))

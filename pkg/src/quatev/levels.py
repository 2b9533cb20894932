"""Tame levels as congruence data, and the conjugation-intersection that
produces a compatible norm-one-side level from a unit-group-side level.

A level at l is a compact open subgroup of GL2(Z_l) or SL2(Z_l) described by
congruence conditions at finite depth n (it is the full preimage of its
reduction mod l^n).  The compatible level attached to Ktilde is

    K = { M in SL2(Z_l) : g M g^{-1} in Ktilde n SL2  for all coset reps g },

with g = diag(1, t) running over representatives of the square classes of
Q_l^*.  All computations happen in finite quotients SL2(Z/l^n); conjugation
by diag(1, t) costs one digit of depth when t has positive valuation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

from .exact import val_int

#: largest finite quotient we will materialize element-by-element
_MATERIALIZE_LIMIT = 3_000_000


class DepthOverflow(ValueError):
    pass


# -- plain matrix helpers mod q ----------------------------------------------


def mat_mul(m1, m2, q):
    a, b, c, d = m1
    e, f, g, h = m2
    return ((a * e + b * g) % q, (a * f + b * h) % q, (c * e + d * g) % q, (c * f + d * h) % q)


def mat_inv_sl2(m, q):
    a, b, c, d = m
    return (d % q, -b % q, -c % q, a % q)


def sl2_elements(q: int, l: int):
    """Iterate over all of SL2(Z/q), q = l^n."""
    units = [a for a in range(q) if a % l != 0]
    for a in range(q):
        if a % l != 0:
            ai = pow(a, -1, q)
            for b in range(q):
                for c in range(q):
                    yield (a, b, c, ai * (1 + b * c) % q)
        else:
            # det 1 forces b to be a unit; then c is determined by d
            for b in units:
                bi = pow(b, -1, q)
                for d in range(q):
                    yield (a, b, (a * d - 1) * bi % q, d)


def sl2_order(l: int, n: int) -> int:
    return l ** (3 * n) * (l * l - 1) // (l * l) if n else 1


def is_subgroup(members: frozenset, q: int) -> bool:
    """Closure check by enumeration; intended for small quotients."""
    if (1 % q, 0, 0, 1 % q) not in members:
        return False
    for m1 in members:
        if mat_inv_sl2(m1, q) not in members:
            return False
        for m2 in members:
            if mat_mul(m1, m2, q) not in members:
                return False
    return True


def mulclose(gens, q) -> frozenset:
    """Subgroup generated by gens inside matrices mod q (det must be 1)."""
    todo = [tuple(x % q for x in g) for g in gens]
    seen = {(1 % q, 0, 0, 1 % q)}
    seen.update(todo)
    while todo:
        m = todo.pop()
        for g in list(seen):
            for prod in (mat_mul(m, g, q), mat_mul(g, m, q)):
                if prod not in seen:
                    seen.add(prod)
                    todo.append(prod)
    return frozenset(seen)


# -- levels -------------------------------------------------------------------

_KINDS = ("full", "iwahori", "opp_iwahori", "principal", "diagonal", "explicit")


@dataclass(frozen=True)
class CongruenceLevel:
    """A compact open level at l, as congruence data of finite depth.

    kind/m:
      full          -- all of GL2(Z_l) resp. SL2(Z_l); depth 0
      iwahori m     -- lower-left entry c = 0 mod l^m
      opp_iwahori m -- upper-right entry b = 0 mod l^m
      principal m   -- M = 1 mod l^m
      diagonal m    -- b = c = 0 mod l^m
      explicit      -- frozenset of member tuples in SL2(Z/l^depth)
    """

    l: int
    side: str  # 'GL2' | 'SL2'
    kind: str
    m: int = 0
    members: frozenset | None = None

    def __post_init__(self):
        if self.side not in ("GL2", "SL2"):
            raise ValueError(f"bad side {self.side}")
        if self.kind not in _KINDS:
            raise ValueError(f"bad kind {self.kind}")
        if self.kind == "explicit":
            if not self.members:
                raise ValueError("explicit level needs members")
            if self.l**self.m <= 81 and not is_subgroup(self.members, self.l**self.m):
                raise ValueError("explicit members do not form a subgroup")

    @property
    def depth(self) -> int:
        return self.m if self.kind != "full" else 0

    def contains(self, mat, avail: int) -> bool:
        """Membership from a residue tuple known mod l^avail.

        The ambient-group condition (determinant) is the caller's business;
        this tests only the congruence conditions of the level.
        """
        if avail < self.depth:
            raise DepthOverflow(f"need depth {self.depth}, have {avail}")
        q = self.l**self.depth
        if self.kind == "full":
            return True
        a, b, c, d = (x % q for x in mat)
        if self.kind == "iwahori":
            return c == 0
        if self.kind == "opp_iwahori":
            return b == 0
        if self.kind == "diagonal":
            return b == 0 and c == 0
        if self.kind == "principal":
            return a == 1 % q and d == 1 % q and b == 0 and c == 0
        return (a, b, c, d) in self.members

    def member_set(self, n: int) -> frozenset:
        """All members of the reduction mod l^n (n >= depth), as SL2 data."""
        if n < self.depth:
            raise DepthOverflow("cannot widen congruence data")
        q = self.l**n
        if sl2_order(self.l, n) > _MATERIALIZE_LIMIT:
            raise DepthOverflow(f"quotient SL2(Z/{self.l}^{n}) too large to materialize")
        return frozenset(m for m in sl2_elements(q, self.l) if self.contains(m, n))

    def describe(self) -> str:
        if self.kind == "full":
            return f"{self.side}(Z_{self.l})"
        if self.kind == "explicit":
            return f"explicit depth {self.m} ({len(self.members)} elements mod {self.l}^{self.m})"
        cond = {
            "iwahori": "c=0",
            "opp_iwahori": "b=0",
            "principal": "M=1",
            "diagonal": "b=c=0",
        }[self.kind]
        return f"{{{cond} mod {self.l}^{self.m}}} in {self.side}(Z_{self.l})"


def coset_reps(l: int) -> list[int]:
    """t-values for diag(1, t) representing the square classes of Q_l^*.

    Odd l: {1, u, l, u l} with u the least positive non-residue; l = 2:
    eight classes {+-1, +-5, +-2, +-10}.
    """
    if l == 2:
        return [1, -1, 5, -5, 2, -2, 10, -10]
    u = next(x for x in range(2, l) if pow(x, (l - 1) // 2, l) == l - 1)
    return [1, u, l, u * l]


def in_conjugate(base: CongruenceLevel, t: int, mat, avail: int) -> bool:
    """Whether diag(1,t) M diag(1,t)^{-1} = (a, b/t; c t, d) is integral and
    satisfies base's congruence conditions, from M known mod l^avail."""
    l = base.l
    v = int(val_int(abs(t), l)) if t else 0
    u = t // l**v
    a, b, c, d = mat
    q_avail = l**avail
    a, b, c, d = a % q_avail, b % q_avail, c % q_avail, d % q_avail
    if v and b % l**v != 0:
        return False
    new_avail = avail - v
    if new_avail < base.depth:
        raise DepthOverflow(f"conjugation by t={t} leaves only depth {new_avail}")
    q = l**new_avail
    ui = pow(u % q, -1, q) if q > 1 else 0
    conj = (a % q, (b // l**v) * ui % q, c * t % q, d % q)
    return base.contains(conj, new_avail)


def _intersection_members(base: CongruenceLevel, n_out: int) -> frozenset:
    l = base.l
    if sl2_order(l, n_out) > _MATERIALIZE_LIMIT:
        raise DepthOverflow(f"quotient SL2(Z/{l}^{n_out}) too large; depth overflow")
    reps = coset_reps(l)
    q = l**n_out
    out = []
    for m in sl2_elements(q, l):
        if all(in_conjugate(base, t, m, n_out) for t in reps):
            out.append(m)
    return frozenset(out)


def _reduce_members(members: frozenset, l: int, n: int) -> tuple[frozenset, int]:
    """Drop depth while the data is the full preimage of its reduction."""
    while n > 0:
        qn = l ** (n - 1)
        image = frozenset((a % qn, b % qn, c % qn, d % qn) for a, b, c, d in members)
        expected = len(image) * (l**3 if n >= 2 else sl2_order(l, 1))
        if len(members) != expected:
            break
        members, n = image, n - 1
    return members, n


def _match_catalog(members: frozenset, l: int, n: int) -> CongruenceLevel | None:
    if n == 0:
        return CongruenceLevel(l, "SL2", "full")
    candidates = []
    for kind in ("iwahori", "opp_iwahori", "diagonal", "principal"):
        for m in range(1, n + 1):
            candidates.append(CongruenceLevel(l, "SL2", kind, m))
    q = l**n
    for cand in candidates:
        if cand.depth != n:
            continue
        if members == frozenset(m for m in sl2_elements(q, l) if cand.contains(m, n)):
            return cand
    return None


def compatible_local_level(ktilde: CongruenceLevel) -> CongruenceLevel:
    """The norm-one-side level cut out by intersecting the diag(1,t)-conjugates
    of ktilde n SL2, expressed at the minimal sufficient depth."""
    l = ktilde.l
    n_out = max(1, ktilde.depth + 1)
    members = _intersection_members(ktilde, n_out)
    members, n = _reduce_members(members, l, n_out)
    tagged = _match_catalog(members, l, n)
    if tagged is not None:
        return tagged
    return CongruenceLevel(l, "SL2", "explicit", n, members)


def verify_conjugation_invariance(k: CongruenceLevel, l: int | None = None) -> bool:
    """Whether the conjugation-intersection applied to k itself reproduces k
    at k's stated depth (checked on finite quotients).

    Literal equality g^{-1} K g = K is impossible for a compact open subgroup
    when t has positive valuation, so the meaningful stability statement is
    that the intersection of the conjugates has the same reduction as k.
    """
    if l is not None and l != k.l:
        raise ValueError("prime mismatch")
    if k.side != "SL2":
        raise ValueError("conjugation invariance is checked on the SL2 side")
    if k.depth == 0:
        # reps carry the maximal compact around the building; at depth 0
        # only the unit reps bite, and those fix it
        return True
    n_out = k.depth + 1
    members = _intersection_members(k, n_out)
    qk = k.l**k.depth
    image = frozenset((a % qk, b % qk, c % qk, d % qk) for a, b, c, d in members)
    return image == k.member_set(k.depth)


# -- global levels -------------------------------------------------------------


@dataclass(frozen=True)
class TameLevel:
    """Level data away from p: explicit congruence levels at finitely many
    primes, the full maximal compact everywhere else."""

    levels: dict = field(default_factory=dict)  # prime -> CongruenceLevel
    side: str = "GL2"

    def __post_init__(self):
        for l, lev in self.levels.items():
            if lev.l != l:
                raise ValueError(f"level at {l} declares prime {lev.l}")
            if lev.side != self.side:
                raise ValueError("mixed sides in tame level")

    def explicit_primes(self) -> list[int]:
        return sorted(self.levels)

    def at(self, l: int) -> CongruenceLevel:
        return self.levels.get(l, CongruenceLevel(l, self.side, "full"))


def global_compatible_level(ktilde: TameLevel, finite_ramified: set[int], p: int) -> TameLevel:
    """Compatible norm-one-side tame level: full SL2(Z_l) outside the explicit
    set, the conjugation-intersection at each explicit prime.

    Requires a finite ramified place, and p must not carry explicit data.
    """
    if not finite_ramified:
        raise ValueError("no finite ramification")
    if p in ktilde.levels:
        raise ValueError(f"tame level must not constrain p={p}")
    out = {l: compatible_local_level(lev) for l, lev in ktilde.levels.items()}
    return TameLevel(out, side="SL2")


# -- serialization --------------------------------------------------------------


def level_to_text(lev: CongruenceLevel) -> str:
    head = f"prime={lev.l} side={lev.side} kind={lev.kind} m={lev.m}"
    if lev.kind != "explicit":
        return head
    gens = " ".join(",".join(str(x) for x in mem) for mem in sorted(lev.members))
    return head + " members " + gens


def level_from_text(line: str) -> CongruenceLevel:
    parts = line.split()
    kv = {}
    members = None
    for i, tok in enumerate(parts):
        if tok == "members":
            members = frozenset(tuple(int(x) for x in t.split(",")) for t in parts[i + 1:])
            break
        k, _, v = tok.partition("=")
        kv[k] = v
    try:
        lev = CongruenceLevel(int(kv["prime"]), kv["side"], kv["kind"], int(kv.get("m", 0)), members)
    except KeyError as e:
        raise ValueError(f"missing field {e} in level description") from e
    return lev

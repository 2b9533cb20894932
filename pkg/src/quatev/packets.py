"""Local and global packet bookkeeping: packet sizes, torus-character types,
the multiplicity formula, and the ramified-place member switch.

Pairing values <1, pi_v> in {1, 2} and <eps, pi_v> in {-1, 0, 1} are input
data; only their ranges and consistency constraints are validated here.  The
multiplicity of an endoscopic member is (prod <1> + prod <eps>) / 2 over the
explicit places (implicit places contribute 1); non-endoscopic members have
constant positive multiplicity 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field

ARCHIMEDEAN = "inf"


@dataclass(frozen=True)
class ThetaCharacter:
    """A character of the norm-one torus of a quadratic field d, of finite
    order.  Conjugation inverts it.  Extension data (when the order is <= 2)
    decides between the extendable and obstructed cases."""

    d: int  # squarefree field label
    order: int
    extension: str | None = None  # 'conjsym' | 'obstructed' | None

    def __post_init__(self):
        if self.order < 1:
            raise ValueError("order must be positive")
        if self.d in (0, 1):
            raise ValueError("d must define a quadratic field")
        if self.extension not in (None, "conjsym", "obstructed"):
            raise ValueError(f"bad extension tag {self.extension}")


def theta_type(theta: ThetaCharacter) -> str:
    """'a' iff theta differs from its conjugate theta^{-1}, i.e. theta^2 != 1;
    for order <= 2, 'c' with conjugation-symmetric extension data, 'b' with an
    obstruction witness, error otherwise."""
    if theta.order > 2:
        return "a"
    if theta.extension == "conjsym":
        return "c"
    if theta.extension == "obstructed":
        return "b"
    raise ValueError("undecidable without extension data")


@dataclass(frozen=True)
class LocalPacket:
    """Packet data at one place: member labels 0..size-1 with their pairing
    values, the ramification flag, and (at good places) the label of the
    member with a hyperspecial fixed vector."""

    place: str  # prime as string, or 'inf'
    ramified: bool
    pairings: tuple  # tuple of (one, eps) per member
    base_member: int | None = None
    unramified: bool = False

    @property
    def size(self) -> int:
        return len(self.pairings)

    def __post_init__(self):
        if self.place == ARCHIMEDEAN and self.size != 1:
            raise ValueError("archimedean packets are singletons")
        allowed = (1, 2) if self.ramified else (1, 2, 4)
        if self.size not in allowed:
            raise ValueError(f"packet size {self.size} invalid at {'ramified' if self.ramified else 'good'} place")
        for one, eps in self.pairings:
            if one not in (1, 2):
                raise ValueError(f"<1,.> = {one} out of range")
            if eps not in (-1, 0, 1):
                raise ValueError(f"<eps,.> = {eps} out of range")
        if self.ramified and self.size == 2:
            e0, e1 = self.pairings[0][1], self.pairings[1][1]
            if e0 != 0 and e1 != 0 and e0 == e1:
                raise ValueError("nonzero <eps,.> values at a ramified place must be distinct")
        if self.unramified:
            if self.ramified:
                raise ValueError("unramified flag at a ramified place")
            if self.base_member is None:
                raise ValueError("unramified packet needs a base member")
        if self.base_member is not None and not (0 <= self.base_member < self.size):
            raise ValueError("base member out of range")


@dataclass(frozen=True)
class GlobalPacketAssignment:
    """A choice of member at each explicit place; implicit places use the
    base member and contribute pairing 1."""

    places: tuple  # tuple of (LocalPacket, chosen member index)
    endoscopic: bool
    theta: ThetaCharacter | None = None

    def __post_init__(self):
        seen = set()
        for packet, chosen in self.places:
            if packet.place in seen:
                raise ValueError(f"duplicate place {packet.place}")
            seen.add(packet.place)
            if not (0 <= chosen < packet.size):
                raise ValueError(f"chosen member {chosen} out of range at {packet.place}")
        if self.endoscopic:
            if self.theta is None:
                raise ValueError("endoscopic assignment needs a torus character")
            if theta_type(self.theta) == "b":
                raise ValueError("type (b) characters do not give automorphic packets here")
        elif self.theta is not None:
            raise ValueError("non-endoscopic assignment must not carry a torus character")

    def replace_member(self, place: str, new_member: int) -> "GlobalPacketAssignment":
        new_places = tuple(
            (packet, new_member if packet.place == place else chosen)
            for packet, chosen in self.places
        )
        return GlobalPacketAssignment(new_places, self.endoscopic, self.theta)


def multiplicity(assignment: GlobalPacketAssignment) -> int:
    """Automorphic multiplicity of the chosen member."""
    if not assignment.endoscopic:
        return 1
    prod_one = 1
    prod_eps = 1
    for packet, chosen in assignment.places:
        one, eps = packet.pairings[chosen]
        prod_one *= one
        prod_eps *= eps
    twice = prod_one + prod_eps
    if twice % 2 != 0 or twice < 0:
        raise ValueError("inconsistent pairing data")
    return twice // 2


def switch_member(assignment: GlobalPacketAssignment, place: str) -> GlobalPacketAssignment:
    """Exchange the member at a ramified place to reach positive multiplicity.

    If the assignment already has positive multiplicity it is returned
    unchanged.  Otherwise the packet at the given place must have size 2 with
    distinct nonzero <eps,.> values, and the other member works.
    """
    if multiplicity(assignment) > 0:
        return assignment
    target = None
    for packet, chosen in assignment.places:
        if packet.place == place:
            target = (packet, chosen)
    if target is None:
        raise ValueError(f"no explicit packet at place {place}")
    packet, chosen = target
    if not packet.ramified:
        raise ValueError(f"place {place} is not ramified")
    for cand in range(packet.size):
        if cand == chosen:
            continue
        switched = assignment.replace_member(place, cand)
        if multiplicity(switched) > 0:
            return switched
    raise ValueError("switch impossible")


# -- input format ----------------------------------------------------------------


def parse_assignment(text: str) -> GlobalPacketAssignment:
    """Parse the line-oriented packet-assignment format.

    Lines: 'endoscopic true|false', optional 'theta d=<int> order=<int>
    [extension=conjsym|obstructed]', and one 'place v=<prime|inf>
    [ramified] [unramified] size=<n> pairings=<one>:<eps>,... chosen=<i>
    [base=<i>]' per explicit place.  '#' starts a comment.
    """
    endoscopic = None
    theta = None
    places = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            head, *toks = line.split()
            kv = dict(t.partition("=")[::2] for t in toks if "=" in t)
            flags = {t for t in toks if "=" not in t}
            if head == "endoscopic":
                endoscopic = toks[0].lower() == "true"
            elif head == "theta":
                theta = ThetaCharacter(int(kv["d"]), int(kv["order"]), kv.get("extension"))
            elif head == "place":
                pairings = tuple(
                    (int(a), int(b))
                    for a, b in (pair.split(":") for pair in kv["pairings"].split(","))
                )
                if int(kv["size"]) != len(pairings):
                    raise ValueError("size disagrees with pairing count")
                packet = LocalPacket(
                    place=kv["v"],
                    ramified="ramified" in flags,
                    pairings=pairings,
                    base_member=int(kv["base"]) if "base" in kv else None,
                    unramified="unramified" in flags,
                )
                places.append((packet, int(kv["chosen"])))
            else:
                raise ValueError(f"unknown directive {head!r}")
        except (KeyError, ValueError, IndexError) as e:
            raise ValueError(f"line {lineno}: {e}") from e
    if endoscopic is None:
        raise ValueError("missing 'endoscopic' directive")
    return GlobalPacketAssignment(tuple(places), endoscopic, theta)


def assignment_to_text(assignment: GlobalPacketAssignment) -> str:
    lines = [f"endoscopic {'true' if assignment.endoscopic else 'false'}"]
    if assignment.theta is not None:
        t = assignment.theta
        ext = f" extension={t.extension}" if t.extension else ""
        lines.append(f"theta d={t.d} order={t.order}{ext}")
    for packet, chosen in assignment.places:
        flags = ""
        if packet.ramified:
            flags += " ramified"
        if packet.unramified:
            flags += " unramified"
        pairings = ",".join(f"{one}:{eps}" for one, eps in packet.pairings)
        base = f" base={packet.base_member}" if packet.base_member is not None else ""
        lines.append(
            f"place v={packet.place}{flags} size={packet.size} pairings={pairings} chosen={chosen}{base}"
        )
    return "\n".join(lines) + "\n"

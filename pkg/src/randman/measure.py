"""Finite standard measure spaces and their measure-preserving automorphisms.

A :class:`MeasureSpace` is a finite list of weighted atoms together with a
finite list of diffuse circles ``R / length Z`` carrying Lebesgue measure.
An :class:`Automorphism` permutes atoms and maps circles onto circles by
rotations.  All masses are exact :class:`fractions.Fraction` values.

Rotation angles are measured in turns and may carry an integer-free multiple
of a single fixed irrational ``TAU0 = (sqrt(5) - 1) / 2``.  With one irrational
only, whether a rotation is periodic is decided exactly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

__all__ = [
    "TAU0",
    "StructureError",
    "ValidationError",
    "parse_scalar",
    "format_scalar",
    "Angle",
    "MeasureSpace",
    "Automorphism",
    "Verdict",
    "Orbit",
    "total_mass",
    "verify_measure_preserving",
    "compose",
    "invert",
    "identity",
    "orbit_decomposition",
    "orbit_signature",
    "disjoint_union",
    "automorphism_sum",
]

TAU0 = (math.sqrt(5.0) - 1.0) / 2.0


class ValidationError(ValueError):
    """Malformed input; ``path`` names the offending field."""

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


class StructureError(ValueError):
    """An automorphism whose maps are not bijections of the base space."""

    def __init__(self, message: str, ids: Iterable[str] = ()):
        self.ids = tuple(sorted(ids))
        super().__init__(f"{message}: {', '.join(self.ids)}" if self.ids else message)


def parse_scalar(value, path: str = "") -> Fraction:
    """Read an exact rational from ``"p/q"``, ``"p"``, an int or a Fraction.

    Floats are refused because they do not round-trip exactly.
    """
    if isinstance(value, bool):
        raise ValidationError(path, f"expected a rational, got {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        num, sep, den = text.partition("/")
        try:
            p = int(num)
            q = int(den) if sep else 1
        except ValueError:
            raise ValidationError(path, f"not a rational 'p/q': {value!r}") from None
        if q == 0:
            raise ValidationError(path, f"zero denominator in {value!r}")
        return Fraction(p, q)
    raise ValidationError(path, f"expected a rational string 'p/q', got {value!r}")


def format_scalar(x: Fraction | int) -> str:
    """Canonical wire format ``"p/q"`` (denominator always written)."""
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class Angle:
    """Rotation by ``rational + tau * TAU0`` turns.

    Only the rational part is reduced mod 1.  Because ``TAU0`` is irrational,
    two angles are equal mod 1 exactly when their ``tau`` parts agree and their
    rational parts agree mod 1, so the dataclass equality is the right one.
    """

    rational: Fraction = Fraction(0)
    tau: Fraction = Fraction(0)

    def __post_init__(self):
        r = Fraction(self.rational)
        object.__setattr__(self, "rational", r - math.floor(r))
        object.__setattr__(self, "tau", Fraction(self.tau))

    def __add__(self, other: Angle) -> Angle:
        return Angle(self.rational + other.rational, self.tau + other.tau)

    def __neg__(self) -> Angle:
        return Angle(-self.rational, -self.tau)

    def __sub__(self, other: Angle) -> Angle:
        return self + (-other)

    def __mul__(self, k: int) -> Angle:
        return Angle(self.rational * k, self.tau * k)

    __rmul__ = __mul__

    @property
    def is_periodic(self) -> bool:
        return self.tau == 0

    @property
    def period(self) -> int | None:
        """Order of the rotation, ``None`` when irrational."""
        return self.rational.denominator if self.is_periodic else None

    @property
    def turns(self) -> float:
        """Numeric value in ``[0, 1)``."""
        v = float(self.rational) + float(self.tau) * TAU0
        return v - math.floor(v)

    def canonical_up_to_sign(self) -> Angle:
        """Representative of the pair ``{theta, -theta}``."""
        neg = -self
        key = lambda a: (a.tau, a.rational)  # noqa: E731
        return min(self, neg, key=key)

    def to_json(self) -> dict:
        return {"rational": format_scalar(self.rational), "tau": format_scalar(self.tau)}

    @classmethod
    def from_json(cls, data, path: str = "angle") -> Angle:
        if isinstance(data, (str, int)):
            return cls(parse_scalar(data, path))
        if not isinstance(data, Mapping):
            raise ValidationError(path, "expected an object {'rational', 'tau'}")
        unknown = set(data) - {"rational", "tau"}
        if unknown:
            # a second symbolic irrational would make periodicity undecidable
            raise ValidationError(path, f"unsupported angle fields {sorted(unknown)}")
        return cls(
            parse_scalar(data.get("rational", 0), f"{path}.rational"),
            parse_scalar(data.get("tau", 0), f"{path}.tau"),
        )

    def __str__(self):
        if self.tau == 0:
            return str(self.rational)
        return f"{self.rational}+{self.tau}*tau0"


def _pairs(items, what: str) -> tuple[tuple[str, Fraction], ...]:
    if isinstance(items, Mapping):
        items = items.items()
    out = []
    for ident, value in items:
        out.append((str(ident), parse_scalar(value, f"{what}[{ident}]")))
    return tuple(sorted(out))


@dataclass(frozen=True)
class MeasureSpace:
    """Finite measure space: weighted atoms plus diffuse circles.

    ``atoms`` and ``segments`` may be given as mappings ``id -> mass`` or as
    iterables of pairs; they are stored sorted by id.
    """

    atoms: tuple[tuple[str, Fraction], ...] = ()
    segments: tuple[tuple[str, Fraction], ...] = ()

    def __post_init__(self):
        atoms = _pairs(self.atoms, "atoms")
        segments = _pairs(self.segments, "segments")
        ids = [a for a, _ in atoms] + [s for s, _ in segments]
        dup = {i for i in ids if ids.count(i) > 1}
        if dup:
            raise ValidationError("ids", f"duplicate ids {sorted(dup)}")
        for a, m in atoms:
            if m < 0:
                raise ValidationError(f"atoms[{a}]", f"negative mass {m}")
        for s, length in segments:
            if length <= 0:
                raise ValidationError(f"segments[{s}]", f"segment length must be > 0, got {length}")
        object.__setattr__(self, "atoms", atoms)
        object.__setattr__(self, "segments", segments)

    @property
    def atom_masses(self) -> dict[str, Fraction]:
        return dict(self.atoms)

    @property
    def segment_lengths(self) -> dict[str, Fraction]:
        return dict(self.segments)

    @property
    def ids(self) -> frozenset[str]:
        return frozenset(a for a, _ in self.atoms) | frozenset(s for s, _ in self.segments)

    @property
    def total_mass(self) -> Fraction:
        return total_mass(self)

    def is_empty(self) -> bool:
        return not self.atoms and not self.segments

    def relabel(self, rename) -> MeasureSpace:
        return MeasureSpace(
            [(rename(a), m) for a, m in self.atoms],
            [(rename(s), length) for s, length in self.segments],
        )

    def to_json(self) -> dict:
        return {
            "atoms": [{"id": a, "mass": format_scalar(m)} for a, m in self.atoms],
            "segments": [{"id": s, "length": format_scalar(x)} for s, x in self.segments],
        }

    @classmethod
    def from_json(cls, data, path: str = "space") -> MeasureSpace:
        if not isinstance(data, Mapping):
            raise ValidationError(path, "expected an object with 'atoms' and 'segments'")
        atoms, segments = [], []
        for k, item in enumerate(data.get("atoms", [])):
            p = f"{path}.atoms[{k}]"
            if not isinstance(item, Mapping) or "id" not in item or "mass" not in item:
                raise ValidationError(p, "expected {'id', 'mass'}")
            atoms.append((str(item["id"]), parse_scalar(item["mass"], f"{p}.mass")))
        for k, item in enumerate(data.get("segments", [])):
            p = f"{path}.segments[{k}]"
            if not isinstance(item, Mapping) or "id" not in item or "length" not in item:
                raise ValidationError(p, "expected {'id', 'length'}")
            segments.append((str(item["id"]), parse_scalar(item["length"], f"{p}.length")))
        try:
            return cls(atoms, segments)
        except ValidationError as exc:
            raise ValidationError(f"{path}.{exc.path}", str(exc).split(": ", 1)[-1]) from None


def total_mass(space: MeasureSpace) -> Fraction:
    return sum((m for _, m in space.atoms), Fraction(0)) + sum(
        (length for _, length in space.segments), Fraction(0)
    )


@dataclass(frozen=True)
class Automorphism:
    """A bijection of atoms plus a bijection of circles with rotations.

    ``segment_map`` sends circle ``s`` onto circle ``t`` by ``x -> x + angle``
    (angle in turns).  Bijectivity is checked at construction; preservation of
    masses is not, see :func:`verify_measure_preserving`.
    """

    base: MeasureSpace
    atom_map: tuple[tuple[str, str], ...] = ()
    segment_map: tuple[tuple[str, str, Angle], ...] = ()

    def __post_init__(self):
        amap = self.atom_map.items() if isinstance(self.atom_map, Mapping) else self.atom_map
        amap = tuple(sorted((str(a), str(b)) for a, b in amap))
        smap = self.segment_map
        if isinstance(smap, Mapping):
            smap = [(s, t, ang) for s, (t, ang) in smap.items()]
        entries = []
        for s, t, ang in smap:
            if not isinstance(ang, Angle):
                ang = Angle(parse_scalar(ang, f"segment_map[{s}].angle"))
            entries.append((str(s), str(t), ang))
        smap = tuple(sorted(entries, key=lambda e: e[0]))
        object.__setattr__(self, "atom_map", amap)
        object.__setattr__(self, "segment_map", smap)
        _check_bijection([a for a, _ in self.base.atoms], amap, "atom_map")
        _check_bijection([s for s, _ in self.base.segments], [(s, t) for s, t, _ in smap], "segment_map")

    @property
    def atoms(self) -> dict[str, str]:
        return dict(self.atom_map)

    @property
    def segments(self) -> dict[str, tuple[str, Angle]]:
        return {s: (t, ang) for s, t, ang in self.segment_map}

    def is_identity(self) -> bool:
        return all(a == b for a, b in self.atom_map) and all(
            s == t and ang == Angle() for s, t, ang in self.segment_map
        )

    def relabel(self, rename) -> Automorphism:
        return Automorphism(
            self.base.relabel(rename),
            [(rename(a), rename(b)) for a, b in self.atom_map],
            [(rename(s), rename(t), ang) for s, t, ang in self.segment_map],
        )

    def restrict(self, ids) -> Automorphism:
        """Restriction to an invariant union of orbits."""
        ids = frozenset(ids)
        base = MeasureSpace(
            [(a, m) for a, m in self.base.atoms if a in ids],
            [(s, x) for s, x in self.base.segments if s in ids],
        )
        return Automorphism(
            base,
            [(a, b) for a, b in self.atom_map if a in ids],
            [e for e in self.segment_map if e[0] in ids],
        )

    def to_json(self) -> dict:
        return {
            "atom_map": [[a, b] for a, b in self.atom_map],
            "segment_map": [{"from": s, "to": t, "angle": ang.to_json()} for s, t, ang in self.segment_map],
        }

    @classmethod
    def from_json(cls, data, base: MeasureSpace, path: str = "gamma") -> Automorphism:
        if not isinstance(data, Mapping):
            raise ValidationError(path, "expected an object with 'atom_map' and 'segment_map'")
        amap = []
        for k, pair in enumerate(data.get("atom_map", [])):
            if not isinstance(pair, (list, tuple)) or len(pair) != 2:
                raise ValidationError(f"{path}.atom_map[{k}]", "expected [from, to]")
            amap.append((str(pair[0]), str(pair[1])))
        smap = []
        for k, item in enumerate(data.get("segment_map", [])):
            p = f"{path}.segment_map[{k}]"
            if not isinstance(item, Mapping) or "from" not in item or "to" not in item:
                raise ValidationError(p, "expected {'from', 'to', 'angle'}")
            smap.append((str(item["from"]), str(item["to"]), Angle.from_json(item.get("angle", 0), f"{p}.angle")))
        try:
            return cls(base, amap, smap)
        except StructureError as exc:
            raise ValidationError(path, str(exc)) from None

    @classmethod
    def rotation(cls, length, angle, segment_id: str = "s") -> Automorphism:
        """Rotation of a single circle of the given length."""
        if not isinstance(angle, Angle):
            angle = Angle(parse_scalar(angle))
        return cls(MeasureSpace(segments={segment_id: length}), (), [(segment_id, segment_id, angle)])

    @classmethod
    def permutation(cls, masses: Mapping, mapping: Mapping) -> Automorphism:
        """Permutation of atoms ``mapping`` over atoms with the given masses."""
        return cls(MeasureSpace(atoms=masses), mapping)


def _check_bijection(domain, pairs, name):
    domain = set(domain)
    sources = [s for s, _ in pairs]
    targets = [t for _, t in pairs]
    bad = set()
    bad |= {s for s in sources if sources.count(s) > 1}
    bad |= {t for t in targets if targets.count(t) > 1}
    bad |= (set(sources) ^ domain) | (set(targets) - domain)
    if bad:
        raise StructureError(f"{name} is not a bijection of the base", bad)


def identity(space: MeasureSpace) -> Automorphism:
    return Automorphism(space, [(a, a) for a, _ in space.atoms], [(s, s, Angle()) for s, _ in space.segments])


@dataclass(frozen=True)
class Verdict:
    """Boolean outcome with the list of violations behind it."""

    ok: bool
    violations: tuple[str, ...] = ()

    def __bool__(self):
        return self.ok


def verify_measure_preserving(gamma: Automorphism) -> Verdict:
    masses = gamma.base.atom_masses
    lengths = gamma.base.segment_lengths
    violations = []
    for a, b in gamma.atom_map:
        if masses[a] != masses[b]:
            violations.append(f"{a}->{b}: {masses[a]} != {masses[b]}")
    for s, t, _ in gamma.segment_map:
        if lengths[s] != lengths[t]:
            violations.append(f"{s}->{t}: {lengths[s]} != {lengths[t]}")
    return Verdict(not violations, tuple(violations))


def compose(gamma: Automorphism, delta: Automorphism) -> Automorphism:
    """``gamma o delta``: apply ``delta`` first."""
    if gamma.base != delta.base:
        raise ValueError("cannot compose automorphisms of different base spaces")
    g_atoms, g_segs = gamma.atoms, gamma.segments
    atom_map = [(a, g_atoms[b]) for a, b in delta.atom_map]
    segment_map = []
    for s, t, first in delta.segment_map:
        u, second = g_segs[t]
        segment_map.append((s, u, first + second))
    return Automorphism(gamma.base, atom_map, segment_map)


def invert(gamma: Automorphism) -> Automorphism:
    return Automorphism(
        gamma.base,
        [(b, a) for a, b in gamma.atom_map],
        [(t, s, -ang) for s, t, ang in gamma.segment_map],
    )


@dataclass(frozen=True)
class Orbit:
    """One orbit of an automorphism.

    For atoms, ``members`` is the cycle starting at its smallest id and
    ``rep_mass`` the mass of one point.  For circles, ``members`` is the cycle
    of circles, ``rotation`` the first-return rotation on the first circle and
    ``rep_mass`` the length of a fundamental domain ``[0, length / q)`` when the
    return rotation has order ``q`` (the full length when it is irrational).
    ``period`` is ``None`` exactly for aperiodic orbits.
    """

    kind: str
    members: tuple[str, ...]
    period: int | None
    rep_mass: Fraction
    rotation: Angle | None = None

    @property
    def periodic(self) -> bool:
        return self.period is not None


def _cycles(mapping: dict[str, str]) -> list[tuple[str, ...]]:
    seen, cycles = set(), []
    for start in sorted(mapping):
        if start in seen:
            continue
        cycle, x = [], start
        while x not in seen:
            seen.add(x)
            cycle.append(x)
            x = mapping[x]
        cycles.append(tuple(cycle))
    return cycles


def orbit_decomposition(gamma: Automorphism) -> list[Orbit]:
    """Atom cycles and circle cycles of ``gamma``, atoms first, in id order."""
    masses = gamma.base.atom_masses
    orbits = [Orbit("atom", c, len(c), masses[c[0]]) for c in _cycles(gamma.atoms)]
    segs = gamma.segments
    lengths = gamma.base.segment_lengths
    for cycle in _cycles({s: t for s, (t, _) in segs.items()}):
        total = Angle()
        for s in cycle:
            total = total + segs[s][1]
        length = lengths[cycle[0]]
        if total.is_periodic:
            q = total.period
            orbits.append(Orbit("segment", cycle, len(cycle) * q, length / q, total))
        else:
            orbits.append(Orbit("segment", cycle, None, length, total))
    return orbits


def orbit_signature(gamma: Automorphism) -> tuple:
    """Sorted multiset of ``(kind, period, rep_mass)``; a conjugation invariant."""
    key = lambda o: (o.kind, -1 if o.period is None else o.period, o.rep_mass)  # noqa: E731
    return tuple(sorted(key(o) for o in orbit_decomposition(gamma)))


def _union_renamers(id_sets):
    """Keep ids when the pieces are already disjoint, else prefix ``"k/"``."""
    seen, clash = set(), False
    for ids in id_sets:
        if seen & ids:
            clash = True
            break
        seen |= ids
    if not clash:
        return [lambda x: x for _ in id_sets]
    return [(lambda x, k=k: f"{k}/{x}") for k in range(len(id_sets))]


def disjoint_union(*spaces: MeasureSpace) -> MeasureSpace:
    """Disjoint union; ids are prefixed with ``"k/"`` only if they collide."""
    renamers = _union_renamers([s.ids for s in spaces])
    atoms, segments = [], []
    for space, rename in zip(spaces, renamers):
        atoms += [(rename(a), m) for a, m in space.atoms]
        segments += [(rename(s), x) for s, x in space.segments]
    return MeasureSpace(atoms, segments)


def automorphism_sum(*gammas: Automorphism) -> Automorphism:
    """The automorphism of the disjoint union acting as ``gammas[k]`` on piece ``k``."""
    renamers = _union_renamers([g.base.ids for g in gammas])
    parts = [g.relabel(r) for g, r in zip(gammas, renamers)]
    base = disjoint_union(*(p.base for p in parts))
    return Automorphism(
        base,
        [pair for p in parts for pair in p.atom_map],
        [e for p in parts for e in p.segment_map],
    )

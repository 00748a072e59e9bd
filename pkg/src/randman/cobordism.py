"""Oriented random manifolds of dimension 0 and 1 and their cobordisms.

Random 0-manifolds are signed measure spaces and are classified by the exact
invariant ``phi0 = mass(plus) - mass(minus)``.  Random 1-manifolds are finite
sums of suspensions of measure-preserving automorphisms.  Every random
1-manifold bounds, but the proof goes through a non-constructive simplicity
theorem, so this module *checks* cobordism witnesses supplied by the caller
and only builds the constructive ones (disk fillings of compact-leaf parts,
pairs of pants, cylinders) itself.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .measure import (
    Automorphism,
    MeasureSpace,
    ValidationError,
    automorphism_sum,
    compose,
    disjoint_union,
    format_scalar,
    identity,
    invert,
    orbit_decomposition,
    orbit_signature,
    parse_scalar,
    total_mass,
    verify_measure_preserving,
)

__all__ = [
    "RandomZeroManifold",
    "phi0",
    "cobordant0",
    "boundary_of_prism",
    "SuspensionPresentation",
    "RandomOneManifold",
    "suspension_normal_form",
    "split_compact_leaves",
    "Comparison",
    "compare_suspensions",
    "CobordismWitness",
    "WitnessReport",
    "pair_of_pants",
    "disk_filling",
    "orientation_inverse",
    "disjoint_sum",
    "verify_witness",
    "AtlasChart",
    "AtlasDescription",
    "atlas_cost",
    "suspension_atlas",
]


# -- dimension 0 -------------------------------------------------------------


@dataclass(frozen=True)
class RandomZeroManifold:
    """A measure space split into positively and negatively oriented points."""

    plus: MeasureSpace = MeasureSpace()
    minus: MeasureSpace = MeasureSpace()

    def __post_init__(self):
        shared = self.plus.ids & self.minus.ids
        if shared:
            raise ValidationError("minus", f"ids shared with plus: {sorted(shared)}")

    def __neg__(self) -> RandomZeroManifold:
        return RandomZeroManifold(self.minus, self.plus)

    def __add__(self, other: RandomZeroManifold) -> RandomZeroManifold:
        # one renaming for all four pieces keeps plus/minus disjoint
        if (self.plus.ids | self.minus.ids).isdisjoint(other.plus.ids | other.minus.ids):
            left = right = lambda x: x  # noqa: E731
        else:
            left, right = (lambda x: f"0/{x}"), (lambda x: f"1/{x}")
        return RandomZeroManifold(
            disjoint_union(self.plus.relabel(left), other.plus.relabel(right)),
            disjoint_union(self.minus.relabel(left), other.minus.relabel(right)),
        )

    def __sub__(self, other: RandomZeroManifold) -> RandomZeroManifold:
        return self + (-other)

    def to_json(self) -> dict:
        return {"plus": self.plus.to_json(), "minus": self.minus.to_json()}

    @classmethod
    def from_json(cls, data, path: str = "") -> RandomZeroManifold:
        if not isinstance(data, Mapping):
            raise ValidationError(path, "expected an object with 'plus' and 'minus'")
        pre = f"{path}." if path else ""
        return cls(
            MeasureSpace.from_json(data.get("plus", {}), f"{pre}plus"),
            MeasureSpace.from_json(data.get("minus", {}), f"{pre}minus"),
        )


def phi0(x: RandomZeroManifold) -> Fraction:
    return total_mass(x.plus) - total_mass(x.minus)


def cobordant0(x: RandomZeroManifold, y: RandomZeroManifold) -> bool:
    return phi0(x) == phi0(y)


def boundary_of_prism(space: MeasureSpace) -> RandomZeroManifold:
    """Boundary of ``[0, 1] x K``: the end ``{1} x K`` minus the end ``{0} x K``."""
    return RandomZeroManifold(
        space.relabel(lambda i: f"1:{i}"),
        space.relabel(lambda i: f"0:{i}"),
    )


# -- dimension 1 -------------------------------------------------------------


@dataclass(frozen=True)
class SuspensionPresentation:
    """``Sigma_gamma``: ``[0, 1] x K`` glued by ``(0, t) ~ (1, gamma(t))``."""

    gamma: Automorphism
    orientation: int = 1

    def __post_init__(self):
        if self.orientation not in (1, -1):
            raise ValidationError("orientation", f"must be +1 or -1, got {self.orientation!r}")
        verdict = verify_measure_preserving(self.gamma)
        if not verdict:
            raise ValidationError("gamma", "not measure preserving: " + "; ".join(verdict.violations))

    @property
    def base(self) -> MeasureSpace:
        return self.gamma.base

    def __neg__(self) -> SuspensionPresentation:
        return SuspensionPresentation(self.gamma, -self.orientation)

    def oriented_gamma(self) -> Automorphism:
        """Holonomy after folding the orientation in: ``-Sigma_g = Sigma_{g^-1}``."""
        return self.gamma if self.orientation == 1 else invert(self.gamma)

    def to_json(self) -> dict:
        return {"base": self.base.to_json(), "gamma": self.gamma.to_json(), "orientation": self.orientation}

    @classmethod
    def from_json(cls, data, path: str = "term") -> SuspensionPresentation:
        if not isinstance(data, Mapping):
            raise ValidationError(path, "expected {'base', 'gamma', 'orientation'}")
        base = MeasureSpace.from_json(data.get("base", {}), f"{path}.base")
        if "gamma" in data:
            gamma = Automorphism.from_json(data["gamma"], base, f"{path}.gamma")
        else:
            gamma = identity(base)
        orientation = data.get("orientation", 1)
        if orientation not in (1, -1):
            raise ValidationError(f"{path}.orientation", f"must be 1 or -1, got {orientation!r}")
        try:
            return cls(gamma, orientation)
        except ValidationError as exc:
            raise ValidationError(f"{path}.{exc.path}", str(exc).split(": ", 1)[-1]) from None


@dataclass(frozen=True)
class RandomOneManifold:
    """Finite formal sum of suspensions over pairwise disjoint bases."""

    terms: tuple[SuspensionPresentation, ...] = ()

    def __post_init__(self):
        terms = tuple(self.terms)
        seen, clash = set(), False
        for t in terms:
            if seen & t.base.ids:
                clash = True
            seen |= t.base.ids
        if clash:
            terms = tuple(
                SuspensionPresentation(t.gamma.relabel(lambda x, k=k: f"{k}/{x}"), t.orientation)
                for k, t in enumerate(terms)
            )
        object.__setattr__(self, "terms", terms)

    @classmethod
    def suspension(cls, gamma: Automorphism, orientation: int = 1) -> RandomOneManifold:
        return cls((SuspensionPresentation(gamma, orientation),))

    @classmethod
    def circle_family(cls, space: MeasureSpace, orientation: int = 1) -> RandomOneManifold:
        """``S^1 x K``."""
        return cls.suspension(identity(space), orientation)

    def __add__(self, other: RandomOneManifold) -> RandomOneManifold:
        return RandomOneManifold(self.terms + other.terms)

    def __neg__(self) -> RandomOneManifold:
        return RandomOneManifold(tuple(-t for t in self.terms))

    def __sub__(self, other: RandomOneManifold) -> RandomOneManifold:
        return self + (-other)

    def is_empty(self) -> bool:
        return all(t.base.is_empty() for t in self.terms)

    def transverse_mass(self) -> Fraction:
        return sum((total_mass(t.base) for t in self.terms), Fraction(0))

    def to_json(self) -> dict:
        return {"terms": [t.to_json() for t in self.terms]}

    @classmethod
    def from_json(cls, data, path: str = "manifold") -> RandomOneManifold:
        if not isinstance(data, Mapping) or not isinstance(data.get("terms", []), list):
            raise ValidationError(path, "expected {'terms': [...]}")
        return cls(tuple(SuspensionPresentation.from_json(t, f"{path}.terms[{k}]") for k, t in enumerate(data.get("terms", []))))


def suspension_normal_form(x: RandomOneManifold) -> SuspensionPresentation:
    """A single positively oriented suspension isomorphic to ``x``."""
    if not x.terms:
        return SuspensionPresentation(identity(MeasureSpace()))
    if len(x.terms) == 1 and x.terms[0].orientation == 1:
        return x.terms[0]
    return SuspensionPresentation(automorphism_sum(*(t.oriented_gamma() for t in x.terms)))


def split_compact_leaves(x: RandomOneManifold) -> tuple[RandomOneManifold, RandomOneManifold]:
    """Split ``x = F + X'`` into compact leaves and leaves that never close up.

    ``F`` is returned as circle families over a fundamental domain: one atom
    (the smallest id) per finite atom orbit, and ``[0, length / q)`` of the
    first circle of each circle cycle whose return rotation has order ``q``.
    ``X'`` keeps the aperiodic circle cycles with their original holonomy.
    """
    compact, rest = [], []
    for term in x.terms:
        atoms, segments, aperiodic = [], [], []
        for orbit in orbit_decomposition(term.gamma):
            if orbit.kind == "atom":
                atoms.append((orbit.members[0], orbit.rep_mass))
            elif orbit.periodic:
                segments.append((orbit.members[0], orbit.rep_mass))
            else:
                aperiodic.extend(orbit.members)
        if atoms or segments:
            fd = MeasureSpace(atoms, segments)
            compact.append(SuspensionPresentation(identity(fd), term.orientation))
        if aperiodic:
            rest.append(SuspensionPresentation(term.gamma.restrict(aperiodic), term.orientation))
    return RandomOneManifold(tuple(compact)), RandomOneManifold(tuple(rest))


# -- isomorphism of suspensions ---------------------------------------------


@dataclass(frozen=True)
class Comparison:
    """Three-valued isomorphism verdict: ``ok``, ``fail`` or ``unknown``."""

    status: str
    detail: str = ""
    relabeling: Mapping[str, str] | None = None

    def to_json(self) -> dict:
        out = {"status": self.status, "detail": self.detail}
        if self.relabeling is not None:
            out["relabeling"] = dict(sorted(self.relabeling.items()))
        return out


def _compact_leaf_measure(f: RandomOneManifold):
    atoms, diffuse = [], Fraction(0)
    for term in f.terms:
        atoms += [(m, a) for a, m in term.base.atoms if m != 0]
        diffuse += sum((x for _, x in term.base.segments), Fraction(0))
    return sorted(atoms), diffuse


def _aperiodic_keys(rest: RandomOneManifold):
    keys = []
    for term in rest.terms:
        for orbit in orbit_decomposition(term.gamma):
            # inducing on the first circle of the cycle leaves the leaves unchanged
            keys.append(((orbit.rep_mass, orbit.rotation.canonical_up_to_sign()), orbit.members[0]))
    return sorted(keys, key=lambda k: (k[0][0], k[0][1].tau, k[0][1].rational, k[1]))


def compare_suspensions(x: RandomOneManifold, y: RandomOneManifold) -> Comparison:
    """Decide whether ``x`` and ``y`` are isomorphic oriented random 1-manifolds.

    ``ok`` comes with an explicit relabeling, ``fail`` with the invariant that
    differs, ``unknown`` when neither could be produced.  Compact leaves are
    compared through their leaf space (fundamental domains), which is a
    complete invariant.  Aperiodic parts are matched up to conjugation by
    rotations and reflections of the circles; a mismatch there is only
    ``unknown`` because different rotations can still give isomorphic
    laminations.
    """
    nx, ny = suspension_normal_form(x), suspension_normal_form(y)
    if nx.gamma == ny.gamma:
        return Comparison("ok", "identical normal forms", {i: i for i in sorted(nx.base.ids)})

    fx, rx = split_compact_leaves(RandomOneManifold((nx,)))
    fy, ry = split_compact_leaves(RandomOneManifold((ny,)))

    ax, dx = _compact_leaf_measure(fx)
    ay, dy = _compact_leaf_measure(fy)
    if [m for m, _ in ax] != [m for m, _ in ay]:
        return Comparison(
            "fail",
            f"compact leaves carry atoms {[str(m) for m, _ in ax]} vs {[str(m) for m, _ in ay]}",
        )
    if dx != dy:
        return Comparison("fail", f"diffuse mass of compact leaves {dx} vs {dy}")

    mx, my = rx.transverse_mass(), ry.transverse_mass()
    if (mx == 0) != (my == 0):
        return Comparison("fail", f"non-compact leaves on one side only (transverse mass {mx} vs {my})")

    kx, ky = _aperiodic_keys(rx), _aperiodic_keys(ry)
    if [k for k, _ in kx] != [k for k, _ in ky]:
        return Comparison(
            "unknown",
            "aperiodic parts differ up to conjugation: "
            f"{[(str(L), str(a)) for (L, a), _ in kx]} vs {[(str(L), str(a)) for (L, a), _ in ky]}",
        )

    relabeling = {a: b for (_, a), (_, b) in zip(ax, ay)}
    relabeling.update({a: b for (_, a), (_, b) in zip(kx, ky)})
    if dx:
        relabeling["<diffuse compact leaves>"] = f"mass {dx}"
    return Comparison("ok", "matching leaf measures and aperiodic rotations", relabeling)


# -- witnesses ---------------------------------------------------------------

WITNESS_KINDS = ("disk_filling", "pair_of_pants", "disjoint_sum", "orientation_inverse")


@dataclass(frozen=True)
class CobordismWitness:
    """A claimed oriented 2-dimensional cobordism, recorded by its boundary.

    ``boundary`` is a list of ``(sign, manifold)`` pairs.  ``payload`` holds
    the data that determines the interior: ``phi``/``psi`` for a pair of
    pants, ``parts`` for a disjoint sum.
    """

    kind: str
    inputs: tuple[RandomOneManifold, ...]
    boundary: tuple[tuple[int, RandomOneManifold], ...]
    payload: Mapping = field(default_factory=dict)

    def to_json(self) -> dict:
        payload = {}
        for key, value in self.payload.items():
            if isinstance(value, Automorphism):
                payload[key] = {"base": value.base.to_json(), "gamma": value.to_json()}
            elif key == "parts":
                payload[key] = [w.to_json() for w in value]
            else:
                payload[key] = value
        return {
            "kind": self.kind,
            "inputs": [m.to_json() for m in self.inputs],
            "boundary": [{"sign": s, "manifold": m.to_json()} for s, m in self.boundary],
            "payload": payload,
        }

    @classmethod
    def from_json(cls, data, path: str = "witness") -> CobordismWitness:
        if not isinstance(data, Mapping):
            raise ValidationError(path, "expected a witness object")
        kind = data.get("kind")
        if kind not in WITNESS_KINDS:
            raise ValidationError(f"{path}.kind", f"unknown witness kind {kind!r}")
        inputs = tuple(RandomOneManifold.from_json(m, f"{path}.inputs[{k}]") for k, m in enumerate(data.get("inputs", [])))
        boundary = []
        for k, item in enumerate(data.get("boundary", [])):
            p = f"{path}.boundary[{k}]"
            if not isinstance(item, Mapping) or item.get("sign") not in (1, -1) or "manifold" not in item:
                raise ValidationError(p, "expected {'sign': 1|-1, 'manifold': ...}")
            boundary.append((item["sign"], RandomOneManifold.from_json(item["manifold"], f"{p}.manifold")))
        payload = {}
        for key, value in dict(data.get("payload", {})).items():
            p = f"{path}.payload.{key}"
            if key in ("phi", "psi"):
                # measure preservation is checked by verify_witness, not here
                base = MeasureSpace.from_json(value.get("base", {}), f"{p}.base")
                payload[key] = Automorphism.from_json(value.get("gamma", {}), base, f"{p}.gamma")
            elif key == "parts":
                payload[key] = tuple(cls.from_json(w, f"{p}[{k}]") for k, w in enumerate(value))
            else:
                payload[key] = value
        return cls(kind, inputs, tuple(boundary), payload)


def pair_of_pants(phi: Automorphism, psi: Automorphism) -> CobordismWitness:
    """Cobordism with boundary ``Sigma_phi + Sigma_psi - Sigma_{phi o psi}``."""
    if phi.base != psi.base:
        raise ValueError("pair_of_pants needs automorphisms of the same base")
    for name, g in (("phi", phi), ("psi", psi)):
        verdict = verify_measure_preserving(g)
        if not verdict:
            raise ValueError(f"{name} is not measure preserving: " + "; ".join(verdict.violations))
    s_phi = RandomOneManifold.suspension(phi)
    s_psi = RandomOneManifold.suspension(psi)
    s_comp = RandomOneManifold.suspension(compose(phi, psi))
    return CobordismWitness(
        "pair_of_pants",
        (s_phi, s_psi),
        ((1, s_phi), (1, s_psi), (-1, s_comp)),
        {"phi": phi, "psi": psi},
    )


def disk_filling(x: RandomOneManifold) -> CobordismWitness:
    """``D^2 x K`` bounding a random 1-manifold whose leaves are all compact."""
    _, rest = split_compact_leaves(x)
    if not rest.is_empty():
        raise ValueError("disk filling needs every leaf to be compact")
    return CobordismWitness("disk_filling", (x,), ((1, x),), {})


def orientation_inverse(x: RandomOneManifold) -> CobordismWitness:
    """The cylinder ``[0, 1] x X`` with boundary ``X - X``."""
    return CobordismWitness("orientation_inverse", (x,), ((1, x), (-1, x)), {})


def disjoint_sum(*parts: CobordismWitness) -> CobordismWitness:
    return CobordismWitness(
        "disjoint_sum",
        tuple(m for w in parts for m in w.inputs),
        tuple(c for w in parts for c in w.boundary),
        {"parts": tuple(parts)},
    )


@dataclass(frozen=True)
class WitnessReport:
    status: str
    kind: str
    components: tuple[dict, ...] = ()

    def __bool__(self):
        return self.status == "ok"

    def to_json(self) -> dict:
        return {"status": self.status, "kind": self.kind, "components": list(self.components)}


def _fold(statuses) -> str:
    statuses = list(statuses)
    if "fail" in statuses:
        return "fail"
    if "unknown" in statuses:
        return "unknown"
    return "ok"


def _expected_boundary(w: CobordismWitness, problems: list) -> list | None:
    if w.kind in ("disk_filling", "orientation_inverse"):
        if len(w.inputs) != 1:
            problems.append(("inputs", "fail", f"{w.kind} takes exactly one input, got {len(w.inputs)}"))
            return None
        x = w.inputs[0]
        if w.kind == "orientation_inverse":
            return [(1, x), (-1, x)]
        _, rest = split_compact_leaves(x)
        if not rest.is_empty():
            problems.append(("interior", "fail", f"input has non-compact leaves of transverse mass {rest.transverse_mass()}"))
        return [(1, x)]

    if w.kind == "pair_of_pants":
        phi, psi = w.payload.get("phi"), w.payload.get("psi")
        if not isinstance(phi, Automorphism) or not isinstance(psi, Automorphism):
            problems.append(("payload", "fail", "pair_of_pants needs 'phi' and 'psi' automorphisms"))
            return None
        if phi.base != psi.base:
            problems.append(("payload", "fail", "phi and psi act on different base spaces"))
            return None
        for name, g in (("phi", phi), ("psi", psi)):
            verdict = verify_measure_preserving(g)
            if not verdict:
                problems.append(("payload", "fail", f"{name} is not measure preserving: " + "; ".join(verdict.violations)))
        if problems:
            return None
        return [
            (1, RandomOneManifold.suspension(phi)),
            (1, RandomOneManifold.suspension(psi)),
            (-1, RandomOneManifold.suspension(compose(phi, psi))),
        ]

    if w.kind == "disjoint_sum":
        parts = w.payload.get("parts", ())
        expected = []
        for k, part in enumerate(parts):
            report = verify_witness(part)
            if report.status != "ok":
                problems.append((f"parts[{k}]", report.status, f"sub-witness {part.kind} is {report.status}"))
            expected.extend(part.boundary)
        return expected

    problems.append(("kind", "fail", f"unknown witness kind {w.kind!r}"))
    return None


def verify_witness(w: CobordismWitness) -> WitnessReport:
    """Check the declared boundary equation of a witness component by component.

    Each declared ``sign * manifold`` is compared with the boundary the
    witness kind and payload actually produce, via :func:`compare_suspensions`.
    """
    problems: list = []
    expected = _expected_boundary(w, problems)
    components = [
        {"component": name, "status": status, "detail": detail} for name, status, detail in problems
    ]
    if expected is not None:
        if len(expected) != len(w.boundary):
            components.append({
                "component": "boundary",
                "status": "fail",
                "detail": f"declared {len(w.boundary)} boundary components, the interior has {len(expected)}",
            })
        else:
            for k, ((s, m), (es, em)) in enumerate(zip(w.boundary, expected)):
                declared = m if s == 1 else -m
                actual = em if es == 1 else -em
                cmp = compare_suspensions(declared, actual)
                entry = {"component": f"boundary[{k}]", "sign": s, **cmp.to_json()}
                if cmp.status == "fail":
                    entry["signatures"] = [
                        _signature_json(suspension_normal_form(declared).gamma),
                        _signature_json(suspension_normal_form(actual).gamma),
                    ]
                components.append(entry)
    components.sort(key=lambda c: str(c["component"]))
    return WitnessReport(_fold(c["status"] for c in components), w.kind, tuple(components))


def _signature_json(gamma: Automorphism):
    return [[kind, period, format_scalar(mass)] for kind, period, mass in orbit_signature(gamma)]


# -- atlases -----------------------------------------------------------------


@dataclass(frozen=True)
class AtlasChart:
    extent: tuple[float, float]
    vertical: MeasureSpace


@dataclass(frozen=True)
class AtlasDescription:
    charts: tuple[AtlasChart, ...] = ()
    compact: bool = True


def atlas_cost(atlas: AtlasDescription) -> Fraction:
    """Sum of the masses of the chart verticals."""
    return sum((total_mass(c.vertical) for c in atlas.charts), Fraction(0))


def suspension_atlas(term: SuspensionPresentation) -> AtlasDescription:
    """Two charts ``(0, 1) x K`` and ``(-1/2, 1/2) x K`` across the gluing."""
    return AtlasDescription(
        (AtlasChart((0.0, 1.0), term.base), AtlasChart((-0.5, 0.5), term.base)),
        compact=True,
    )

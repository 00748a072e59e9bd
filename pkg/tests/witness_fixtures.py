"""Forged cobordism witnesses: each one has to be refused by verify_witness."""
from fractions import Fraction

from randman.cobordism import (
    CobordismWitness,
    RandomOneManifold,
    disjoint_sum,
    disk_filling,
    orientation_inverse,
    pair_of_pants,
)
from randman.measure import Angle, Automorphism, MeasureSpace

F = Fraction


def rot(angle, length=1, sid="s"):
    return Automorphism.rotation(length, angle, sid)


def susp(g):
    return RandomOneManifold.suspension(g)


def three_cycle():
    return Automorphism.permutation({"a": F(1, 3), "b": F(1, 3), "c": F(1, 3)}, {"a": "b", "b": "c", "c": "a"})


def swap(mass=F(1, 2)):
    return Automorphism.permutation({"a": mass, "b": mass}, {"a": "b", "b": "a"})


def forged_witnesses() -> dict[str, CobordismWitness]:
    out = {}
    x = susp(rot(F(1, 3)))
    out["cylinder with a different far end"] = CobordismWitness(
        "orientation_inverse", (x,), ((1, x), (-1, susp(rot(F(1, 4))))), {}
    )
    good = pair_of_pants(rot(F(1, 3)), rot(F(1, 4)))
    out["pants with a wrong waist"] = CobordismWitness(
        good.kind, good.inputs, good.boundary[:2] + ((-1, susp(rot(F(1, 2)))),), good.payload
    )
    base = MeasureSpace(atoms={"a": 1, "b": 2})
    bad = Automorphism(base, {"a": "b", "b": "a"})
    out["pants over a non measure preserving map"] = CobordismWitness(
        "pair_of_pants", good.inputs, good.boundary, {"phi": bad, "psi": bad}
    )
    out["pants over different bases"] = CobordismWitness(
        "pair_of_pants", good.inputs, good.boundary, {"phi": rot(F(1, 3)), "psi": rot(F(1, 3), sid="t")}
    )
    out["pants without psi"] = CobordismWitness("pair_of_pants", good.inputs, good.boundary, {"phi": rot(F(1, 3))})
    irr = susp(rot(Angle(0, 1)))
    out["disk filling an irrational rotation"] = CobordismWitness("disk_filling", (irr,), ((1, irr),), {})
    out["disk with a mislabelled rim"] = CobordismWitness(
        "disk_filling", (susp(three_cycle()),), ((1, susp(swap())),), {}
    )
    out["pants missing a leg"] = CobordismWitness(good.kind, good.inputs, good.boundary[:2], good.payload)
    out["sum hiding a forged part"] = disjoint_sum(
        disk_filling(susp(three_cycle())), out["cylinder with a different far end"]
    )
    out["disk with two inputs"] = CobordismWitness("disk_filling", (x, x), ((1, x),), {})
    ident = Automorphism.permutation({"a": F(1, 2), "b": F(1, 2)}, {"a": "a", "b": "b"})
    pants = pair_of_pants(swap(), swap())
    out["pants with an untwisted leg"] = CobordismWitness(
        pants.kind, pants.inputs, ((1, susp(ident)),) + pants.boundary[1:], pants.payload
    )
    out["unknown kind"] = CobordismWitness("handle", (x,), ((1, x),), {})
    out["cylinder closing up an irrational end"] = CobordismWitness(
        "orientation_inverse", (irr,), ((1, irr), (-1, susp(rot(0)))), {}
    )
    return out


def honest_witnesses() -> dict[str, CobordismWitness]:
    return {
        "pants 1/3, 1/4": pair_of_pants(rot(F(1, 3)), rot(F(1, 4))),
        "pants of permutations": pair_of_pants(three_cycle(), three_cycle()),
        "pants irrational": pair_of_pants(rot(Angle(F(1, 5), 1)), rot(Angle(0, -1))),
        "disk over a 3-cycle": disk_filling(susp(three_cycle())),
        "cylinder": orientation_inverse(susp(rot(Angle(0, 2)))),
        "sum": disjoint_sum(disk_filling(susp(swap())), pair_of_pants(swap(), swap())),
    }

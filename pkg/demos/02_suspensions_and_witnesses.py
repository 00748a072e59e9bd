#!/usr/bin/env python3
"""Suspensions of measure preserving maps, and how cobordism witnesses are checked.

The suspension of gamma: K -> K is the mapping torus.  Its leaves close up
along finite orbits; split_compact_leaves separates those from the rest.
A witness claims some 2-dimensional cobordism and lists its boundary;
verify_witness recomputes the boundary and compares leaf by leaf.
"""
from fractions import Fraction

from randman import (
    Angle,
    Automorphism,
    CobordismWitness,
    RandomOneManifold,
    orientation_inverse,
    pair_of_pants,
    split_compact_leaves,
    verify_witness,
)


def show(title, x):
    f, rest = split_compact_leaves(x)
    leaves = [f"{i}:{m}" for t in f.terms for i, m in t.base.atoms + t.base.segments]
    print(f"{title:<28} compact leaves {leaves or '-'}  non-compact mass {rest.transverse_mass()}")


third = Fraction(1, 3)
cycle = Automorphism.permutation({"a": third, "b": third, "c": third}, {"a": "b", "b": "c", "c": "a"})
show("3-cycle of atoms", RandomOneManifold.suspension(cycle))
show("rotation by 3/8, length 2", RandomOneManifold.suspension(Automorphism.rotation(2, Fraction(3, 8))))
show("irrational rotation", RandomOneManifold.suspension(Automorphism.rotation(1, Angle(0, 1))))

print()
phi, psi = Automorphism.rotation(1, third), Automorphism.rotation(1, Fraction(1, 4))
w = pair_of_pants(phi, psi)
print("pair of pants for 1/3 and 1/4:", verify_witness(w).status)

x = RandomOneManifold.suspension(phi)
print("cylinder X - X:", verify_witness(orientation_inverse(x)).status)

forged = CobordismWitness("orientation_inverse", (x,), ((1, x), (-1, RandomOneManifold.suspension(psi))), {})
report = verify_witness(forged)
print("cylinder with a swapped end:", report.status)
for c in report.components:
    print(f"  {c['component']}: {c['status']} ({c['detail']})")

#!/usr/bin/env python3
"""Random 0-manifolds are classified by a single rational number.

A random 0-manifold is a finite measure space whose points carry a sign.
Its class is phi0 = (mass of + points) - (mass of - points).  This script
builds a few, checks additivity, and shows that prism boundaries vanish.
"""
import random
from fractions import Fraction

from randman import MeasureSpace, RandomZeroManifold, boundary_of_prism, cobordant0, phi0

x = RandomZeroManifold(MeasureSpace(atoms={"a": Fraction(1, 2), "b": 1}))
y = RandomZeroManifold(MeasureSpace(atoms={"c": Fraction(1, 3)}), MeasureSpace(atoms={"d": Fraction(5, 6)}))

print(f"phi0(x)      = {phi0(x)}")
print(f"phi0(y)      = {phi0(y)}")
print(f"phi0(x + y)  = {phi0(x + y)}")
print(f"phi0(-x)     = {phi0(-x)}")
print(f"x ~ 0 ?        {cobordant0(x, RandomZeroManifold())}")

# [0,1] x K has boundary {1} x K - {0} x K, so phi0 is zero whatever K is
rng = random.Random(1)
for _ in range(3):
    k = MeasureSpace(atoms={f"k{i}": Fraction(rng.randint(1, 9), rng.randint(1, 9)) for i in range(4)})
    print(f"mass(K) = {str(k.total_mass):>6}   phi0(boundary of prism) = {phi0(boundary_of_prism(k))}")

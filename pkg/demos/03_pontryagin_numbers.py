#!/usr/bin/env python3
"""Pontryagin numbers of products of even complex projective spaces.

The matrix p_beta(M_alpha) over partitions of n is invertible, so any
rational vector of Pontryagin numbers is realized by a weighted ensemble of
the M_alpha.  We print the tables, then solve for a target and check it.
"""
from fractions import Fraction

from randman import expected_pontryagin, format_partition, partitions, pontryagin_matrix, solve_target
from randman.integration import expected_value

for n in range(1, 4):
    order, a, det = pontryagin_matrix(n)
    labels = [format_partition(b) for b in order]
    print(f"n = {n}   det = {det}")
    print("        " + "".join(f"{lab:>8}" for lab in labels))
    for lab, row in zip(labels, a):
        print(f"{lab:>8}" + "".join(f"{str(x):>8}" for x in row))
    print()

target = [Fraction(1), Fraction(0)]
e = solve_target(2, target)
for c in e.components:
    sign = "+" if c.orientation > 0 else "-"
    print(f"  {sign}{c.manifold.label:<10} weight {c.weight}")
print("reproduced:", [str(expected_pontryagin(e, b)) for b in partitions(2)])

# an observable on the ensemble, e.g. the signature via L_2 = (7 p2 - p1^2) / 45
signature = {"CP4": 1, "CP2xCP2": 1}
print("expected signature:", expected_value(e, signature))

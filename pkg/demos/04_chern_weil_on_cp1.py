#!/usr/bin/env python3
"""Chern-Weil integrals on CP^1 from projection fields, and how they converge.

The tautological line on CP^1 is P = v v^H / |v|^2 on two affine charts.
The curvature of the Grassmann connection integrates to c1 = -1 up to a
second-order discretization error; the tangent bundle gives 2.
"""
import math

from randman.chernweil import (
    characteristic_integrals,
    chern_character,
    connection_independence_check,
    whitney_sum_check,
)
from randman.geometries import builtin

ch1 = [chern_character(1)]
prev = None
print(f"{'N':>5} {'ch1':>12} {'error':>10} {'order':>6}")
for n in (25, 50, 100, 200, 400):
    g = builtin("cp1-tautological", n)
    v = characteristic_integrals(g.field, g.grid, ch1)["ch1"]
    err = abs(v + 1)
    order = "" if prev is None else f"{math.log2(prev / err):6.2f}"
    print(f"{n:>5} {v:>12.8f} {err:>10.2e} {order}")
    prev = err

g = builtin("cp1-tangent")
print("\ntangent bundle ch1:", round(characteristic_integrals(g.field, g.grid, ch1)["ch1"], 5))

g = builtin("cp1-tautological")
print("perturbed connection:", connection_independence_check(g.field, g.grid, seed=7).to_json())
print("L + L, twisted:      ", whitney_sum_check(g.field, g.field, g.grid).to_json())

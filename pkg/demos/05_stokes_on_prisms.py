#!/usr/bin/env python3
"""Stokes' theorem on V x K with an atomic vertical K.

Integrating d(omega) and omega over the boundary gives the same number per
atom, weighted by its mass.  The difference shrinks like h^2; quadratics
are integrated exactly.
"""
from fractions import Fraction

import numpy as np

from randman import MeasureSpace
from randman.integration import PrismForm, stokes_check

k = MeasureSpace(atoms={"a": Fraction(1, 3), "b": Fraction(2, 3)})
samples = {
    "x^2": lambda x: x**2,
    "exp(sin 3x)": lambda x: np.exp(np.sin(3 * x)),
    "log(1 + x)": lambda x: np.log1p(x),
}
for name, f in samples.items():
    for n in (125, 250, 500, 1000):
        rep = stokes_check(PrismForm(1, (0.0, 1.0), n, k, {"a": (0, (f,)), "b": (0, (f,))}))
        order = "-" if rep.order_estimate is None else f"{rep.order_estimate:.2f}"
        print(f"{name:<12} N={n:<5} residual {rep.residual:.2e}  order {order}")

# a 1-form on the unit square: d(xy dx) = -x dx dy
sq = PrismForm(2, (0.0, 1.0, 0.0, 1.0), 101, k, {a: (1, (lambda x, y: x * y, lambda x, y: 0 * x)) for a in "ab"})
rep = stokes_check(sq)
print(f"\nsquare: lhs {rep.lhs:.6f}  rhs {rep.rhs:.6f}")

"""Reference computations that share no code with the package."""
from __future__ import annotations

from fractions import Fraction

import sympy


def pentagonal_partition_counts(limit: int) -> list[int]:
    """p(0..limit) from Euler's pentagonal recurrence."""
    p = [1] + [0] * limit
    for n in range(1, limit + 1):
        total, k = 0, 1
        while True:
            g1 = k * (3 * k - 1) // 2
            if g1 > n:
                break
            sign = 1 if k % 2 else -1
            total += sign * p[n - g1]
            g2 = k * (3 * k + 1) // 2
            if g2 <= n:
                total += sign * p[n - g2]
            k += 1
        p[n] = total
    return p


def pontryagin_number_sympy(alpha, beta) -> int:
    """p_beta[prod CP^(2 a)] by direct sympy expansion of prod (1 + g^2)^(2a + 1)."""
    gens = sympy.symbols(f"g0:{len(alpha)}")
    total = sympy.Integer(1)
    for g, a in zip(gens, alpha):
        total *= (1 + g**2) ** (2 * a + 1)
    poly = sympy.Poly(sympy.expand(total), *gens)

    def part(k):
        # degree 2k in the g's, i.e. the class p_k
        return sum(c * sympy.prod([g**e for g, e in zip(gens, m)])
                   for m, c in poly.terms() if sum(m) == 2 * k)

    product = sympy.Integer(1)
    for b in beta:
        product *= part(b)
    top = sympy.Poly(sympy.expand(product), *gens)
    return int(top.coeff_monomial(sympy.prod([g ** (2 * a) for g, a in zip(gens, alpha)])))


def atom_cycles(mapping: dict) -> list[list]:
    """Cycles of a permutation by following every point until it returns."""
    cycles, seen = [], set()
    for start in mapping:
        if start in seen:
            continue
        cycle = [start]
        x = mapping[start]
        while x != start:
            cycle.append(x)
            x = mapping[x]
        seen.update(cycle)
        cycles.append(cycle)
    return cycles


def rotation_orbit(length: Fraction, circles: list, rotations: list, start=0):
    """Follow the point 0 on the first circle of a cycle of rational rotations.

    Returns ``(period, fundamental_domain_length)``; the domain length is the
    total length of the cycle divided by the number of points in one orbit.
    """
    pos, idx, steps = Fraction(start), 0, 0
    while True:
        pos = (pos + rotations[idx] * length) % length
        idx = (idx + 1) % len(circles)
        steps += 1
        if idx == 0 and pos == start:
            return steps, length * len(circles) / steps

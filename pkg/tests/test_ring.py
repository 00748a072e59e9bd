from fractions import Fraction

import sympy
from hypothesis import given
from hypothesis import strategies as st

from randman.ring import TruncatedPolynomial

CAPS = (2, 3)
g = sympy.symbols("g0:2")

coeffs = st.builds(Fraction, st.integers(-5, 5), st.integers(1, 4))
polys = st.dictionaries(st.tuples(st.integers(0, 4), st.integers(0, 4)), coeffs, max_size=6).map(
    lambda t: TruncatedPolynomial(CAPS, t)
)


def to_sympy(p: TruncatedPolynomial):
    return sum((sympy.Rational(c.numerator, c.denominator) * g[0] ** a * g[1] ** b for (a, b), c in p.terms.items()), sympy.Integer(0))


def truncated(expr):
    poly = sympy.Poly(sympy.expand(expr), *g)
    return sum((c * g[0] ** a * g[1] ** b for (a, b), c in poly.terms() if a <= CAPS[0] and b <= CAPS[1]), sympy.Integer(0))


@given(polys, polys)
def test_product_matches_sympy(p, q):
    assert sympy.expand(to_sympy(p * q) - truncated(to_sympy(p) * to_sympy(q))) == 0


@given(polys, st.integers(0, 6))
def test_power_matches_sympy(p, k):
    assert sympy.expand(to_sympy(p**k) - truncated(to_sympy(p) ** k)) == 0


@given(polys, polys, polys)
def test_ring_axioms(p, q, r):
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r
    assert p + q == q + p and p * q == q * p
    assert p - p == TruncatedPolynomial(CAPS)


def test_truncation_and_top_coefficient():
    x = TruncatedPolynomial.generator((2,), 0)
    assert x**3 == TruncatedPolynomial((2,))
    assert ((1 + x * x) ** 3).top_coefficient() == 3
    assert repr(TruncatedPolynomial((2,))) == "0"

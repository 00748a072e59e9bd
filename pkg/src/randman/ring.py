"""Truncated polynomial rings ``Q[g_1, ..., g_r] / (g_i^(m_i + 1))``.

This is the cohomology ring of ``CP^m_1 x ... x CP^m_r`` with ``g_i`` the
hyperplane class of the i-th factor (real degree 2).
"""
from __future__ import annotations

from fractions import Fraction
from typing import Mapping

__all__ = ["TruncatedPolynomial"]


class TruncatedPolynomial:
    """Element of ``Q[g_1..g_r]/(g_i^(m_i+1))``, stored as ``{exponents: coeff}``.

    Parameters
    ----------
    caps : tuple of int
        ``m_i``; the monomial ``g_i^(m_i+1)`` and everything above it vanish.
    terms : mapping, optional
        Exponent tuples to coefficients.  Zero coefficients and truncated
        monomials are dropped.
    """

    __slots__ = ("caps", "terms")

    def __init__(self, caps, terms: Mapping | None = None):
        self.caps = tuple(int(m) for m in caps)
        clean = {}
        for exps, c in (terms or {}).items():
            exps = tuple(exps)
            if len(exps) != len(self.caps):
                raise ValueError(f"monomial {exps} does not match {len(self.caps)} generators")
            c = Fraction(c)
            if c and all(0 <= e <= m for e, m in zip(exps, self.caps)):
                clean[exps] = clean.get(exps, Fraction(0)) + c
        self.terms = {k: v for k, v in clean.items() if v}

    @classmethod
    def one(cls, caps) -> TruncatedPolynomial:
        return cls(caps, {(0,) * len(caps): 1})

    @classmethod
    def generator(cls, caps, i: int) -> TruncatedPolynomial:
        exps = [0] * len(caps)
        exps[i] = 1
        return cls(caps, {tuple(exps): 1})

    def _check(self, other):
        if not isinstance(other, TruncatedPolynomial):
            other = TruncatedPolynomial(self.caps, {(0,) * len(self.caps): other})
        if other.caps != self.caps:
            raise ValueError(f"ring mismatch: caps {self.caps} vs {other.caps}")
        return other

    def __add__(self, other):
        other = self._check(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, Fraction(0)) + v
        return TruncatedPolynomial(self.caps, out)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedPolynomial(self.caps, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._check(other))

    def __mul__(self, other):
        other = self._check(other)
        out: dict = {}
        caps = self.caps
        for ka, va in self.terms.items():
            for kb, vb in other.terms.items():
                k = tuple(a + b for a, b in zip(ka, kb))
                if all(e <= m for e, m in zip(k, caps)):
                    out[k] = out.get(k, Fraction(0)) + va * vb
        return TruncatedPolynomial(caps, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        result = TruncatedPolynomial.one(self.caps)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, TruncatedPolynomial):
            return NotImplemented
        return self.caps == other.caps and self.terms == other.terms

    def __hash__(self):
        return hash((self.caps, frozenset(self.terms.items())))

    def degree_part(self, d: int) -> TruncatedPolynomial:
        """Homogeneous component of polynomial degree ``d`` (real degree ``2d``)."""
        return TruncatedPolynomial(self.caps, {k: v for k, v in self.terms.items() if sum(k) == d})

    def coefficient(self, exps) -> Fraction:
        return self.terms.get(tuple(exps), Fraction(0))

    def top_coefficient(self) -> Fraction:
        """Evaluation on the fundamental class: the coefficient of ``prod g_i^m_i``."""
        return self.coefficient(self.caps)

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for exps in sorted(self.terms, key=lambda e: (sum(e), tuple(-x for x in e))):
            c = self.terms[exps]
            mono = "*".join(
                (f"g{i + 1}" if e == 1 else f"g{i + 1}^{e}") for i, e in enumerate(exps) if e
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts)

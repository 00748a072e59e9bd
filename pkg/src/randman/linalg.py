"""Exact Gaussian elimination over the rationals."""
from __future__ import annotations

from fractions import Fraction

__all__ = ["SingularMatrixError", "det", "solve"]


class SingularMatrixError(ArithmeticError):
    pass


def _pivot(rows, col, start):
    # smallest |num| * den among nonzero entries keeps intermediate sizes down
    best, best_key = None, None
    for r in range(start, len(rows)):
        x = rows[r][col]
        if x:
            key = abs(x.numerator) * x.denominator
            if best is None or key < best_key:
                best, best_key = r, key
    return best


def _eliminate(matrix, rhs=None):
    n = len(matrix)
    rows = [[Fraction(x) for x in row] + ([Fraction(rhs[i])] if rhs is not None else []) for i, row in enumerate(matrix)]
    for row in rows:
        if len(row) != n + (rhs is not None):
            raise ValueError("matrix must be square")
    sign = 1
    for col in range(n):
        p = _pivot(rows, col, col)
        if p is None:
            return None, 0
        if p != col:
            rows[col], rows[p] = rows[p], rows[col]
            sign = -sign
        piv = rows[col][col]
        for r in range(col + 1, n):
            f = rows[r][col] / piv
            if f:
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[col])]
    return rows, sign


def det(matrix) -> Fraction:
    """Determinant; the empty matrix has determinant 1."""
    rows, sign = _eliminate(matrix)
    if rows is None:
        return Fraction(0)
    out = Fraction(sign)
    for i, row in enumerate(rows):
        out *= row[i]
    return out


def solve(matrix, rhs) -> list[Fraction]:
    """Solve ``matrix @ x = rhs`` exactly."""
    if len(rhs) != len(matrix):
        raise ValueError(f"right-hand side has length {len(rhs)}, expected {len(matrix)}")
    rows, _ = _eliminate(matrix, rhs)
    if rows is None:
        raise SingularMatrixError("matrix is singular")
    n = len(rows)
    x = [Fraction(0)] * n
    for i in reversed(range(n)):
        acc = rows[i][n] - sum((rows[i][j] * x[j] for j in range(i + 1, n)), Fraction(0))
        x[i] = acc / rows[i][i]
    return x

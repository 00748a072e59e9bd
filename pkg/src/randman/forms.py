"""Pointwise algebra of differential forms with array-valued coefficients.

A form is a dict ``{mask: array}``: bit ``k`` of ``mask`` stands for
``dx_k`` and the basis element is ``dx_{i_1} ^ ... ^ dx_{i_p}`` with
``i_1 < ... < i_p``.  Matrix-valued forms carry arrays of shape ``(..., k, k)``.
Coefficients broadcast over leading grid axes, so one call evaluates a whole
block of sample points.
"""
from __future__ import annotations

import numpy as np

__all__ = [
    "degree",
    "wedge_sign",
    "basis_2forms",
    "add",
    "scale",
    "wedge",
    "mat_wedge",
    "mat_trace",
    "mat_power",
    "identity_form",
    "det_one_plus",
    "det_one_plus_newton",
    "exp_form",
    "truncate",
]


def degree(mask: int) -> int:
    return bin(mask).count("1")


def wedge_sign(a: int, b: int) -> int:
    """Sign of ``dx_a ^ dx_b`` against the sorted basis element; 0 if they overlap."""
    if a & b:
        return 0
    swaps, j = 0, 0
    while b >> j:
        if (b >> j) & 1:
            swaps += degree(a >> (j + 1))
        j += 1
    return -1 if swaps % 2 else 1


def basis_2forms(dim: int) -> list[tuple[int, int, int]]:
    """``(i, j, mask)`` for ``i < j``, in lexicographic order."""
    return [(i, j, (1 << i) | (1 << j)) for i in range(dim) for j in range(i + 1, dim)]


def truncate(form: dict, max_degree: int) -> dict:
    return {m: v for m, v in form.items() if degree(m) <= max_degree}


def add(*forms: dict) -> dict:
    out: dict = {}
    for f in forms:
        for m, v in f.items():
            out[m] = out[m] + v if m in out else v
    return out


def scale(form: dict, c) -> dict:
    return {m: c * v for m, v in form.items()}


def wedge(a: dict, b: dict, max_degree: int) -> dict:
    """Wedge of scalar forms."""
    out: dict = {}
    for ma, va in a.items():
        for mb, vb in b.items():
            if degree(ma) + degree(mb) > max_degree:
                continue
            s = wedge_sign(ma, mb)
            if s:
                term = va * vb if s > 0 else -(va * vb)
                m = ma | mb
                out[m] = out[m] + term if m in out else term
    return out


def mat_wedge(a: dict, b: dict, max_degree: int) -> dict:
    """Wedge of matrix-valued forms: matrix product with the sign of the basis."""
    out: dict = {}
    for ma, va in a.items():
        for mb, vb in b.items():
            if degree(ma) + degree(mb) > max_degree:
                continue
            s = wedge_sign(ma, mb)
            if s:
                term = va @ vb
                if s < 0:
                    term = -term
                m = ma | mb
                out[m] = out[m] + term if m in out else term
    return out


def mat_trace(a: dict) -> dict:
    return {m: np.trace(v, axis1=-2, axis2=-1) for m, v in a.items()}


def mat_power(a: dict, n: int, max_degree: int) -> dict:
    if n == 0:
        raise ValueError("use identity_form for the zeroth power")
    out = a
    for _ in range(n - 1):
        out = mat_wedge(out, a, max_degree)
    return out


def identity_form(shape, k: int, dtype=float) -> dict:
    return {0: np.broadcast_to(np.eye(k, dtype=dtype), tuple(shape) + (k, k)).copy()}


def _inverse_unipotent(x: dict, max_degree: int) -> dict:
    """``1 / x`` for ``x = c + nilpotent`` with ``c`` invertible."""
    c = x[0]
    n = {m: v / c for m, v in x.items() if m}
    inv = {0: np.ones_like(c)}
    term = {0: np.ones_like(c)}
    for _ in range(max_degree // 2 + 1):
        term = scale(wedge(term, n, max_degree), -1)
        if not term:
            break
        inv = add(inv, term)
    return scale(inv, 1 / c)


def det_one_plus(a: dict, max_degree: int) -> dict:
    """``det(1 + A)`` for a matrix of even forms without degree-0 part.

    Gaussian elimination over the commutative algebra of even forms.  Every
    pivot is ``1 + nilpotent``, so no pivoting is needed.
    """
    k = next(iter(a.values())).shape[-1]
    shape = next(iter(a.values())).shape[:-2]
    one = np.ones(shape, dtype=next(iter(a.values())).dtype)
    entries = [[{m: v[..., i, j] for m, v in a.items()} for j in range(k)] for i in range(k)]
    for i in range(k):
        entries[i][i] = add(entries[i][i], {0: one})
    det = {0: one}
    for col in range(k):
        piv = entries[col][col]
        det = wedge(det, piv, max_degree)
        inv = _inverse_unipotent(piv, max_degree)
        for r in range(col + 1, k):
            f = wedge(entries[r][col], inv, max_degree)
            if not f:
                continue
            for c in range(col + 1, k):
                entries[r][c] = add(entries[r][c], scale(wedge(f, entries[col][c], max_degree), -1))
    return det


def exp_form(x: dict, max_degree: int) -> dict:
    """``exp`` of a scalar even form without degree-0 part."""
    shape = next(iter(x.values())).shape if x else ()
    out = {0: np.ones(shape)}
    term = {0: np.ones(shape)}
    for j in range(1, max_degree // 2 + 1):
        term = scale(wedge(term, x, max_degree), 1 / j)
        out = add(out, term)
    return out


def det_one_plus_newton(a: dict, max_degree: int) -> dict:
    """``det(1 + A) = exp(sum_k (-1)^(k+1) tr(A^k) / k)``; independent of :func:`det_one_plus`."""
    log = {}
    power = a
    for j in range(1, max_degree // 2 + 1):
        log = add(log, scale(mat_trace(power), (-1) ** (j + 1) / j))
        power = mat_wedge(power, a, max_degree)
    log = {m: v for m, v in log.items() if m}
    return exp_form(log, max_degree)


"""Pontryagin numbers of products of even complex projective spaces.

For a partition ``alpha`` of ``n`` let ``M_alpha = prod_{k in alpha} CP^(2k)``,
a closed oriented manifold of real dimension ``4n``.  Its cohomology is a
truncated polynomial ring in one degree-2 class per factor and its total
Pontryagin class is ``prod_i (1 + g_i^2)^(m_i + 1)`` for ``m_i = 2 k_i``.

The matrix ``A[alpha][beta] = p_beta(M_alpha)`` is nonsingular, so any vector
of Pontryagin numbers ``v`` is realized by the measured ensemble
``sum_alpha lambda_alpha M_alpha`` where ``A^T lambda = v``.

Rows and columns are indexed by partitions in reverse-lexicographic order,
e.g. ``(4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1)`` for ``n = 4``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Sequence

from .linalg import SingularMatrixError, det, solve
from .measure import ValidationError, format_scalar, parse_scalar
from .ring import TruncatedPolynomial

__all__ = [
    "partitions",
    "partition_count",
    "format_partition",
    "parse_partition",
    "ProjectiveProduct",
    "total_pontryagin_class",
    "pontryagin_class",
    "pontryagin_number",
    "pontryagin_matrix",
    "EnsembleComponent",
    "EnsembleDescription",
    "solve_target",
    "expected_pontryagin",
    "RoundTripError",
]


def partitions(n: int) -> list[tuple[int, ...]]:
    """All partitions of ``n`` as descending tuples, reverse-lexicographic.

    >>> partitions(3)
    [(3,), (2, 1), (1, 1, 1)]
    """
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    return list(_partitions(n, n))


@lru_cache(maxsize=None)
def _partitions(n: int, largest: int) -> tuple[tuple[int, ...], ...]:
    if n == 0:
        return ((),)
    out = []
    for first in range(min(n, largest), 0, -1):
        out.extend((first,) + rest for rest in _partitions(n - first, first))
    return tuple(out)


def partition_count(n: int) -> int:
    """``p(n)`` by a bounded-part recursion (no enumeration)."""
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    table = [1] + [0] * n
    for part in range(1, n + 1):
        for total in range(part, n + 1):
            table[total] += table[total - part]
    return table[n]


def format_partition(alpha: Sequence[int]) -> str:
    return "+".join(str(k) for k in alpha) if alpha else "0"


def parse_partition(text: str, path: str = "partition") -> tuple[int, ...]:
    if text.strip() == "0":
        return ()
    try:
        parts = tuple(sorted((int(p) for p in text.split("+")), reverse=True))
    except ValueError:
        raise ValidationError(path, f"not a partition like '2+1+1': {text!r}") from None
    if any(p <= 0 for p in parts):
        raise ValidationError(path, f"parts must be positive: {text!r}")
    return parts


@dataclass(frozen=True)
class ProjectiveProduct:
    """``CP^(m_1) x ... x CP^(m_r)`` given by the complex dimensions ``m_i``."""

    dims: tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(m) for m in self.dims)
        if any(m <= 0 for m in dims):
            raise ValueError(f"complex dimensions must be positive, got {dims}")
        object.__setattr__(self, "dims", dims)

    @classmethod
    def from_partition(cls, alpha: Sequence[int]) -> ProjectiveProduct:
        """``M_alpha = prod_{k in alpha} CP^(2k)``."""
        return cls(tuple(2 * k for k in alpha))

    @property
    def real_dimension(self) -> int:
        return 2 * sum(self.dims)

    @property
    def label(self) -> str:
        return "x".join(f"CP{m}" for m in self.dims) or "pt"

    @classmethod
    def from_label(cls, label: str) -> ProjectiveProduct:
        if label == "pt":
            return cls(())
        try:
            return cls(tuple(int(f.removeprefix("CP")) for f in label.split("x")))
        except ValueError:
            raise ValidationError("manifold", f"expected a label like 'CP4xCP2', got {label!r}") from None

    def ring_one(self) -> TruncatedPolynomial:
        return TruncatedPolynomial.one(self.dims)


@lru_cache(maxsize=None)
def total_pontryagin_class(m: ProjectiveProduct) -> TruncatedPolynomial:
    caps = m.dims
    out = TruncatedPolynomial.one(caps)
    for i, dim in enumerate(caps):
        g = TruncatedPolynomial.generator(caps, i)
        out = out * (1 + g * g) ** (dim + 1)
    return out


def pontryagin_class(m: ProjectiveProduct, k: int) -> TruncatedPolynomial:
    """``p_k(M)``, the part of real degree ``4k``."""
    return total_pontryagin_class(m).degree_part(2 * k)


def pontryagin_number(m: ProjectiveProduct, beta: Sequence[int]) -> Fraction:
    """``<prod_{k in beta} p_k(M), [M]>``."""
    if 4 * sum(beta) != m.real_dimension:
        raise ValueError(
            f"partition {format_partition(beta)} has degree {4 * sum(beta)}, "
            f"but {m.label} has dimension {m.real_dimension}"
        )
    prod = m.ring_one()
    for k in beta:
        prod = prod * pontryagin_class(m, k)
    return prod.top_coefficient()


@lru_cache(maxsize=None)
def _matrix(n: int):
    order = partitions(n) if n > 0 else []
    rows = tuple(
        tuple(pontryagin_number(ProjectiveProduct.from_partition(a), b) for b in order) for a in order
    )
    return tuple(order), rows, det(rows)


def pontryagin_matrix(n: int):
    """``(order, A, det A)`` with ``A[i][j] = p_{order[j]}(M_{order[i]})``.

    ``n = 0`` gives the empty matrix with determinant 1.
    """
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    order, rows, d = _matrix(n)
    return list(order), [list(r) for r in rows], d


@dataclass(frozen=True)
class EnsembleComponent:
    manifold: ProjectiveProduct
    weight: Fraction
    orientation: int = 1

    def __post_init__(self):
        w = parse_scalar(self.weight, "weight")
        if w <= 0:
            raise ValidationError("weight", f"must be > 0, got {w}")
        if self.orientation not in (1, -1):
            raise ValidationError("orientation", f"must be +1 or -1, got {self.orientation!r}")
        object.__setattr__(self, "weight", w)

    @property
    def signed_weight(self) -> Fraction:
        return self.orientation * self.weight


@dataclass(frozen=True)
class EnsembleDescription:
    """``sum_i orientation_i * M_i x K_{weight_i}``."""

    components: tuple[EnsembleComponent, ...] = ()

    def to_json(self) -> dict:
        return {
            "components": [
                {
                    "manifold": c.manifold.label,
                    "weight": format_scalar(c.weight),
                    "orientation": c.orientation,
                }
                for c in self.components
            ]
        }

    @classmethod
    def from_json(cls, data, path: str = "ensemble") -> EnsembleDescription:
        if not isinstance(data, Mapping) or not isinstance(data.get("components"), list):
            raise ValidationError(path, "expected {'components': [...]}")
        comps = []
        for k, item in enumerate(data["components"]):
            p = f"{path}.components[{k}]"
            if not isinstance(item, Mapping) or "manifold" not in item or "weight" not in item:
                raise ValidationError(p, "expected {'manifold', 'weight', 'orientation'}")
            try:
                comps.append(EnsembleComponent(
                    ProjectiveProduct.from_label(item["manifold"]),
                    parse_scalar(item["weight"], f"{p}.weight"),
                    item.get("orientation", 1),
                ))
            except ValidationError as exc:
                raise ValidationError(f"{p}.{exc.path}", str(exc).split(": ", 1)[-1]) from None
        return cls(tuple(comps))


class RoundTripError(AssertionError):
    """The solved ensemble did not reproduce the target (internal inconsistency)."""


def expected_pontryagin(e: EnsembleDescription, beta: Sequence[int]) -> Fraction:
    return sum(
        (c.signed_weight * pontryagin_number(c.manifold, beta) for c in e.components), Fraction(0)
    )


def solve_target(n: int, target) -> EnsembleDescription:
    """Ensemble of ``M_alpha`` realizing the Pontryagin numbers ``target``.

    ``target`` is a sequence in partition order or a mapping from partitions
    (tuples or strings like ``"2+1"``) to rationals.
    """
    order, a, d = pontryagin_matrix(n)
    v = _target_vector(order, target)
    if d == 0:
        raise SingularMatrixError(f"Pontryagin matrix for n={n} is singular")
    at = [[a[i][j] for i in range(len(order))] for j in range(len(order))]
    lam = solve(at, v)
    e = EnsembleDescription(tuple(
        EnsembleComponent(ProjectiveProduct.from_partition(alpha), abs(x), 1 if x > 0 else -1)
        for alpha, x in zip(order, lam)
        if x
    ))
    got = [expected_pontryagin(e, beta) for beta in order]
    if got != v:
        raise RoundTripError(f"round trip gave {got}, expected {v}")
    return e


def _target_vector(order, target) -> list[Fraction]:
    if isinstance(target, Mapping):
        parsed = {}
        for key, value in target.items():
            alpha = parse_partition(key, f"target[{key}]") if isinstance(key, str) else tuple(key)
            parsed[alpha] = parse_scalar(value, f"target[{format_partition(alpha)}]")
        unknown = set(parsed) - set(order)
        missing = set(order) - set(parsed)
        if unknown or missing:
            raise ValidationError(
                "target",
                f"expected entries for {[format_partition(a) for a in order]}; "
                f"missing {sorted(format_partition(a) for a in missing)}, "
                f"unexpected {sorted(format_partition(a) for a in unknown)}",
            )
        return [parsed[a] for a in order]
    values = list(target)
    if len(values) != len(order):
        raise ValidationError("target", f"expected {len(order)} entries, got {len(values)}")
    return [parse_scalar(x, f"target[{k}]") for k, x in enumerate(values)]

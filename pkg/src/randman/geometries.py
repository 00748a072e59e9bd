"""Named test geometries and the JSON geometry format.

``CP^m`` is covered by the ``m + 1`` affine charts ``Z_j != 0``, each a cube
``[-2, 2]^(2m)`` in real coordinates.  The tautological line ``L`` is the
image of ``v v^H / |v|^2`` for the homogeneous vector ``v``, and the tangent
bundle is ``Hom(L, L^perp) = conj(L) (x) L^perp``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .chernweil import (
    Chart,
    ChartedGrid,
    Complement,
    Conjugate,
    Constant,
    DirectSum,
    InvariantPolynomial,
    Leaf,
    ProjectionField,
    TensorProduct,
    bump,
    chern_character,
    total_pontryagin,
)
from .expr import compile_expression
from .measure import ValidationError

__all__ = [
    "Geometry",
    "projective_grid",
    "homogeneous_vector",
    "tautological",
    "builtin",
    "BUILTINS",
    "geometry_from_json",
]

EXTENT = 2.0


@dataclass
class Geometry:
    """A projection field on a grid plus the characteristic numbers it should produce."""

    name: str
    grid: ChartedGrid
    field: ProjectionField
    expected: dict[str, tuple[InvariantPolynomial, float]] = field(default_factory=dict)


def _complex(coords: np.ndarray) -> np.ndarray:
    return coords[..., 0::2] + 1j * coords[..., 1::2]


def _real(z: np.ndarray) -> np.ndarray:
    out = np.empty(z.shape[:-1] + (2 * z.shape[-1],))
    out[..., 0::2] = z.real
    out[..., 1::2] = z.imag
    return out


def homogeneous_vector(chart: int, coords: np.ndarray) -> np.ndarray:
    """``(Z_0, ..., Z_m)`` with ``Z_chart = 1`` and the chart coordinates elsewhere."""
    z = _complex(coords)
    one = np.ones(z.shape[:-1] + (1,), dtype=complex)
    return np.concatenate([z[..., :chart], one, z[..., chart:]], axis=-1)


def _transition(i: int, j: int, coords: np.ndarray) -> np.ndarray:
    v = homogeneous_vector(i, coords)
    with np.errstate(divide="ignore", invalid="ignore"):
        w = v / v[..., j : j + 1]
    w = np.delete(w, j, axis=-1)
    bad = ~np.isfinite(w).all(axis=-1)
    out = _real(np.where(np.isfinite(w), w, 0))
    out[bad] = np.nan
    return out


def projective_grid(m: int, resolution: int) -> ChartedGrid:
    charts = tuple(Chart((-EXTENT, EXTENT) * (2 * m)) for _ in range(m + 1))
    return ChartedGrid(charts, resolution, _transition)


def tautological(m: int) -> Leaf:
    return Leaf.from_vector(homogeneous_vector, m + 1, name=f"tautological(CP{m})")


def _tangent(m: int) -> ProjectionField:
    line = tautological(m)
    return TensorProduct(Conjugate(line), Complement(line))


def builtin(name: str, resolution: int | None = None) -> Geometry:
    """``cp1-tautological``, ``cp1-tangent``, ``cp2-tautological``, ``cp2-tangent``, ``flat-rank-R``."""
    ch1, ch2, p = chern_character(1), chern_character(2), total_pontryagin()
    if name == "cp1-tautological":
        return Geometry(name, projective_grid(1, resolution or 200), tautological(1), {"ch1": (ch1, -1.0)})
    if name == "cp1-tangent":
        return Geometry(name, projective_grid(1, resolution or 200), _tangent(1), {"ch1": (ch1, 2.0)})
    if name == "cp2-tautological":
        return Geometry(
            name, projective_grid(2, resolution or 48), tautological(2), {"ch2": (ch2, 0.5), "p1": (p, 1.0)}
        )
    if name == "cp2-tangent":
        return Geometry(
            name, projective_grid(2, resolution or 64), _tangent(2), {"ch2": (ch2, 1.5), "p1": (p, 3.0)}
        )
    if name.startswith("flat-rank-"):
        try:
            r = int(name.removeprefix("flat-rank-"))
        except ValueError:
            raise ValidationError("geometry", f"unknown geometry {name!r}") from None
        if r < 1:
            raise ValidationError("geometry", f"rank must be positive in {name!r}")
        return Geometry(name, projective_grid(1, resolution or 200), Constant(np.eye(r)), {"ch1": (ch1, 0.0)})
    raise ValidationError("geometry", f"unknown geometry {name!r}; known: {', '.join(BUILTINS)}, flat-rank-R")


BUILTINS = ("cp1-tautological", "cp1-tangent", "cp2-tautological", "cp2-tangent", "flat-rank-2")


# -- JSON ---------------------------------------------------------------------


def _variables(dim: int) -> tuple[str, ...]:
    if dim == 2:
        return ("x", "y", "z")
    names = []
    for k in range(dim // 2):
        names += [f"x{k + 1}", f"y{k + 1}"]
    return tuple(names) + tuple(f"z{k + 1}" for k in range(dim // 2))


def _env(coords: np.ndarray, dim: int) -> dict:
    names = _variables(dim)
    env = {}
    if dim == 2:
        env = {"x": coords[..., 0], "y": coords[..., 1], "z": coords[..., 0] + 1j * coords[..., 1]}
    else:
        for k in range(dim // 2):
            x, y = coords[..., 2 * k], coords[..., 2 * k + 1]
            env[f"x{k + 1}"], env[f"y{k + 1}"], env[f"z{k + 1}"] = x, y, x + 1j * y
    return {n: env[n] for n in names}


def _shaped(value, shape):
    return np.broadcast_to(np.asarray(value, dtype=complex), shape)


def geometry_from_json(data, resolution: int | None = None) -> Geometry:
    """Read ``{"dim", "resolution", "charts": [...]}``.

    Each chart is ``{"extent", "orientation", "weight", "vector" | "projection"}``;
    ``weight`` is an expression for the partition-of-unity function (may use
    ``bump(r)`` and ``norm``), ``vector`` a list of expressions ``v`` giving
    ``P = v v^H / |v|^2``, ``projection`` a matrix of expressions.  Optional
    ``"expected": {"ch1": -1}`` records target values.
    """
    if not isinstance(data, Mapping):
        raise ValidationError("geometry", "expected an object")
    dim = data.get("dim", 2)
    if dim not in (2, 4):
        raise ValidationError("geometry.dim", f"must be 2 or 4, got {dim!r}")
    res = int(resolution or data.get("resolution", 100))
    names = _variables(dim) + ("r",)
    specs = data.get("charts")
    if not isinstance(specs, list) or not specs:
        raise ValidationError("geometry.charts", "expected a non-empty list")
    charts, vectors, matrices = [], [], []
    size = None
    for k, spec in enumerate(specs):
        p = f"geometry.charts[{k}]"
        extent = tuple(float(x) for x in spec.get("extent", [-EXTENT, EXTENT] * dim))
        if len(extent) != 2 * dim:
            raise ValidationError(f"{p}.extent", f"expected {2 * dim} numbers")
        weight = None
        if spec.get("weight") is not None:
            wf = compile_expression(spec["weight"], names, f"{p}.weight")
            weight = lambda c, wf=wf: np.real(wf(**_env(c, dim), r=np.linalg.norm(c, axis=-1)))  # noqa: E731
        elif len(specs) > 1:
            raise ValidationError(f"{p}.weight", "several charts need explicit weights")
        charts.append(Chart(extent, int(spec.get("orientation", 1)), weight))
        if "vector" in spec:
            fs = [compile_expression(e, names, f"{p}.vector[{j}]") for j, e in enumerate(spec["vector"])]
            vectors.append(fs)
            n = len(fs)
        elif "projection" in spec:
            fs = [[compile_expression(e, names, f"{p}.projection[{a}][{b}]") for b, e in enumerate(row)]
                  for a, row in enumerate(spec["projection"])]
            matrices.append(fs)
            n = len(fs)
        else:
            raise ValidationError(p, "needs 'vector' or 'projection'")
        if size is not None and n != size:
            raise ValidationError(p, f"matrix size {n} differs from {size}")
        size = n
    if vectors and matrices:
        raise ValidationError("geometry.charts", "mix of 'vector' and 'projection' charts")

    def env(c):
        return {**_env(c, dim), "r": np.linalg.norm(c, axis=-1)}

    if vectors:
        def vfunc(chart, coords):
            e = env(coords)
            return np.stack([_shaped(f(**e), coords.shape[:-1]) for f in vectors[chart]], axis=-1)
        pfield = Leaf.from_vector(vfunc, size, name="geometry")
    else:
        def mfunc(chart, coords):
            e = env(coords)
            rows = [np.stack([_shaped(f(**e), coords.shape[:-1]) for f in row], axis=-1) for row in matrices[chart]]
            return np.stack(rows, axis=-2)
        probe = np.zeros((1, dim))
        rank = int(round(float(np.real(np.trace(mfunc(0, probe)[0])))))
        pfield = Leaf(mfunc, size, rank, name="geometry")

    expected = {}
    for key, value in dict(data.get("expected", {})).items():
        if key.startswith("ch"):
            expected[key] = (chern_character(int(key[2:])), float(value))
        elif key == "p1":
            expected[key] = (total_pontryagin(), float(value))
        else:
            raise ValidationError(f"geometry.expected.{key}", "expected keys like 'ch1', 'ch2' or 'p1'")
    if not expected:
        expected[f"ch{dim // 2}"] = (chern_character(dim // 2), None)
    return Geometry(data.get("name", "custom"), ChartedGrid(tuple(charts), res), pfield, expected)

"""Integration over prisms ``V x K`` with an atomic vertical measure.

A form on ``V x K`` is one form on ``V`` per atom of ``K``; integrating over
the vertical is a mass-weighted sum.  ``V`` is an interval (``dim = 1``) or a
rectangle (``dim = 2``) sampled on a uniform grid of ``n`` points per axis.

Component conventions, with ``x`` along axis 0 and ``y`` along axis 1:

* degree 0: ``[f]``
* degree 1: ``[f]`` for ``f dx`` (dim 1), ``[P, Q]`` for ``P dx + Q dy`` (dim 2)
* degree 2: ``[f]`` for ``f dx ^ dy``

The boundary carries the outward-normal-first orientation, i.e. ``b - a`` on
an interval and the counterclockwise loop on a rectangle.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Sequence

import numpy as np

from .expr import compile_expression
from .measure import MeasureSpace, ValidationError, parse_scalar

__all__ = [
    "PrismForm",
    "StokesReport",
    "fundamental_cycle",
    "exterior_derivative",
    "boundary_integral",
    "stokes_check",
    "expected_value",
]


@dataclass(frozen=True)
class PrismForm:
    """A differential form on ``V x K``.

    ``forms`` maps each atom id to ``(degree, components)`` where the
    components are sampled arrays or callables of the coordinate arrays.
    Callables let :func:`stokes_check` resample at a finer grid.
    """

    dim: int
    extent: tuple[float, ...]
    n: int
    vertical: MeasureSpace
    forms: Mapping[str, tuple[int, tuple]]
    orientation: int = 1

    def __post_init__(self):
        if self.dim not in (1, 2):
            raise ValidationError("base.dim", f"must be 1 or 2, got {self.dim}")
        if len(self.extent) != 2 * self.dim:
            raise ValidationError("base.extent", f"expected {2 * self.dim} numbers, got {len(self.extent)}")
        if self.n < 3:
            raise ValidationError("base.n", f"need at least 3 grid points, got {self.n}")
        if self.vertical.segments:
            raise ValidationError("vertical", "only atomic verticals are supported")
        if self.orientation not in (1, -1):
            raise ValidationError("orientation", f"must be +1 or -1, got {self.orientation}")
        atoms = {a for a, _ in self.vertical.atoms}
        missing = atoms - set(self.forms)
        if missing:
            raise ValidationError("forms", f"no form given for atoms {sorted(missing)}")
        degrees = {deg for deg, _ in self.forms.values()}
        if len(degrees) > 1:
            raise ValidationError("forms", f"mixed degrees {sorted(degrees)}")
        for a, (deg, comps) in self.forms.items():
            if not 0 <= deg <= self.dim:
                raise ValidationError(f"forms[{a}].degree", f"must be between 0 and {self.dim}")
            want = math.comb(self.dim, deg)
            if len(comps) != want:
                raise ValidationError(f"forms[{a}].components", f"degree {deg} needs {want} components, got {len(comps)}")

    @property
    def degree(self) -> int:
        return next(iter(self.forms.values()))[0] if self.forms else self.dim

    def axes(self, n: int | None = None) -> list[np.ndarray]:
        n = self.n if n is None else n
        return [np.linspace(self.extent[2 * k], self.extent[2 * k + 1], n) for k in range(self.dim)]

    def mesh(self, n: int | None = None) -> list[np.ndarray]:
        return np.meshgrid(*self.axes(n), indexing="ij")

    def resampleable(self) -> bool:
        return all(callable(c) for _, comps in self.forms.values() for c in comps)

    def sampled(self, atom: str, n: int | None = None) -> list[np.ndarray]:
        deg, comps = self.forms[atom]
        mesh = self.mesh(n)
        shape = mesh[0].shape
        out = []
        for c in comps:
            if callable(c):
                arr = np.broadcast_to(np.asarray(c(*mesh), dtype=float), shape)
            else:
                if n is not None and n != self.n:
                    raise ValueError("array components cannot be resampled")
                arr = np.asarray(c, dtype=float)
                if arr.shape != shape:
                    raise ValidationError(f"forms[{atom}]", f"component shape {arr.shape}, grid is {shape}")
            out.append(arr)
        return out

    def __neg__(self) -> PrismForm:
        return PrismForm(self.dim, self.extent, self.n, self.vertical, self.forms, -self.orientation)

    @classmethod
    def from_json(cls, data, path: str = "prism") -> PrismForm:
        if not isinstance(data, Mapping):
            raise ValidationError(path, "expected {'base', 'vertical', 'forms'}")
        base = data.get("base", {})
        dim = base.get("dim")
        extent = tuple(float(x) for x in base.get("extent", [0, 1] * (dim or 1)))
        n = int(base.get("n", 0))
        vertical = MeasureSpace.from_json(data.get("vertical", {}), f"{path}.vertical")
        names = ("x", "y")[: dim or 1]
        forms = {}
        for atom, spec in dict(data.get("forms", {})).items():
            p = f"{path}.forms[{atom}]"
            if not isinstance(spec, Mapping) or "degree" not in spec or "components" not in spec:
                raise ValidationError(p, "expected {'degree', 'components'}")
            comps = []
            for k, c in enumerate(spec["components"]):
                if isinstance(c, str):
                    f = compile_expression(c, names, f"{p}.components[{k}]")
                    comps.append(lambda *m, f=f: f(**dict(zip(names, m))))
                else:
                    comps.append(np.asarray(c, dtype=float))
            forms[str(atom)] = (int(spec["degree"]), tuple(comps))
        return cls(dim, extent, n, vertical, forms, int(data.get("orientation", 1)))


def _trapezoid(values: np.ndarray, axes: Sequence[np.ndarray]) -> float:
    out = values
    for ax in reversed(axes):
        out = np.trapezoid(out, ax, axis=-1)
    return float(out)


def fundamental_cycle(f: PrismForm) -> float:
    """``sum_atoms mass * int_V omega_atom`` for a top-degree form."""
    if f.degree != f.dim:
        raise ValueError(f"fundamental cycle needs a degree-{f.dim} form, got degree {f.degree}")
    axes = f.axes()
    total = 0.0
    for atom, mass in f.vertical.atoms:
        (top,) = f.sampled(atom)
        total += float(mass) * _trapezoid(top, axes)
    return f.orientation * total


def exterior_derivative(comps: list[np.ndarray], degree: int, axes) -> list[np.ndarray]:
    """``d`` by second-order finite differences (one-sided at the edges)."""
    dim = len(axes)
    grad = lambda a, k: np.gradient(a, axes[k], axis=k, edge_order=2)  # noqa: E731
    if degree == 0:
        return [grad(comps[0], k) for k in range(dim)]
    if degree == 1 and dim == 2:
        p, q = comps
        return [grad(q, 0) - grad(p, 1)]
    return [np.zeros_like(comps[0])]


def boundary_integral(comps: list[np.ndarray], degree: int, axes) -> float:
    """``int_{dV} omega`` for a form of degree ``dim - 1``."""
    if len(axes) == 1:
        (a,) = comps
        return float(a[-1] - a[0])
    x, y = axes
    p, q = comps
    bottom = np.trapezoid(p[:, 0], x)
    right = np.trapezoid(q[-1, :], y)
    top = np.trapezoid(p[:, -1], x)
    left = np.trapezoid(q[0, :], y)
    return float(bottom + right - top - left)


def _sides(f: PrismForm, n: int | None):
    axes = f.axes(n)
    lhs = rhs = 0.0
    for atom, mass in f.vertical.atoms:
        comps = f.sampled(atom, n)
        d = exterior_derivative(comps, f.degree, axes)
        lhs += float(mass) * _trapezoid(d[0], axes)
        rhs += float(mass) * boundary_integral(comps, f.degree, axes)
    return f.orientation * lhs, f.orientation * rhs


def _subsampled(f: PrismForm) -> PrismForm:
    forms = {
        a: (deg, tuple(np.asarray(c)[(slice(None, None, 2),) * f.dim] for c in comps))
        for a, (deg, comps) in f.forms.items()
    }
    return PrismForm(f.dim, f.extent, (f.n - 1) // 2 + 1, f.vertical, forms, f.orientation)


@dataclass(frozen=True)
class StokesReport:
    lhs: float
    rhs: float
    residual: float
    order_estimate: float | None
    tolerance: float
    passed: bool
    resolution: int = 0

    def to_json(self) -> dict:
        return {
            "lhs": self.lhs,
            "rhs": self.rhs,
            "residual": self.residual,
            "order_estimate": self.order_estimate,
            "resolution": self.resolution,
            "tolerance": self.tolerance,
            "pass": self.passed,
        }


def stokes_check(f: PrismForm, tolerance: float = 1e-6) -> StokesReport:
    """Compare ``int d omega`` with ``int_boundary omega``.

    The order estimate compares the residual at ``n`` with the residual one
    grid-halving away: callables are resampled at ``2n - 1`` points, arrays
    are subsampled to every other point.  It is ``None`` when either residual
    is at rounding level (the difference scheme is exact on quadratics) or
    when the grid cannot be halved.
    """
    if f.degree != f.dim - 1:
        raise ValueError(f"Stokes check needs a degree-{f.dim - 1} form, got degree {f.degree}")
    lhs, rhs = _sides(f, None)
    residual = abs(lhs - rhs)
    if f.resampleable():
        fine = abs(float.__sub__(*_sides(f, 2 * f.n - 1)))
        coarse = residual
    elif (f.n - 1) % 2 == 0 and f.n >= 5:
        fine = residual
        coarse = abs(float.__sub__(*_sides(_subsampled(f), None)))
    else:
        fine = coarse = None
    order = None
    if fine is not None:
        floor = 1e-13 * max(1.0, abs(lhs), abs(rhs))
        if fine > floor and coarse > floor:
            order = math.log2(coarse / fine)
    return StokesReport(lhs, rhs, residual, order, tolerance, residual <= tolerance, f.n)


def expected_value(ensemble, observable: Mapping) -> Fraction:
    """Exact ``sum orientation * weight * b(component)``.

    ``ensemble`` is an ``EnsembleDescription`` (components keyed by manifold
    label) or an iterable of ``(id, weight, orientation)`` triples.
    """
    if hasattr(ensemble, "components"):
        items = [(c.manifold.label, c.weight, c.orientation) for c in ensemble.components]
    else:
        items = [tuple(x) if len(x) == 3 else (x[0], x[1], 1) for x in ensemble]
    total = Fraction(0)
    for key, weight, orientation in items:
        if key not in observable:
            raise KeyError(f"no observable value for component {key!r}")
        total += orientation * parse_scalar(weight) * parse_scalar(observable[key], f"observable[{key}]")
    return total

"""Numerical Chern-Weil theory for projection fields on charted grids.

A vector bundle is presented as the image of a field of Hermitian projections
``P(x)``.  The Grassmann connection ``P o d`` has curvature
``R = P dP ^ dP P``; characteristic forms are invariant polynomials of ``R``
and characteristic numbers are their integrals, assembled chart by chart
with a partition of unity.

Conventions, fixed once:

* ``ch_n = tr((i R / 2 pi)^n) / n!``
* ``p = det(1 + R_real / 2 pi)`` where ``R_real`` is the real ``2r x 2r``
  form of ``R``
* charts use complex coordinates ``z_k = x_k + i y_k`` with real axes ordered
  ``x_1, y_1, x_2, y_2``; this orientation gives the tautological line bundle
  on ``CP^1`` first Chern number ``-1``.

Invariants are evaluated on the curvature in an orthonormal frame of the
image, ``F = e^H R e`` with ``P = e e^H``.  For ``Z_a = e^H d_a P``,
``F_ab = Z_a Z_b^H - Z_b Z_a^H``.  Tensor products are handled frame by
frame through the Leibniz rule, so ``P (x) Q`` is never materialized.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

import numpy as np

from . import forms as fm
from ._kernels import connection_from_jet

__all__ = [
    "PLATEAU",
    "SUPPORT",
    "ProjectionError",
    "smooth_step",
    "bump",
    "Chart",
    "ChartedGrid",
    "Block",
    "ProjectionField",
    "Leaf",
    "Constant",
    "Conjugate",
    "Complement",
    "DirectSum",
    "TensorProduct",
    "Materialized",
    "Twisted",
    "frame_from_projection",
    "realify",
    "MatrixFormField",
    "InvariantPolynomial",
    "chern_character",
    "total_pontryagin",
    "trace_power",
    "grassmann_connection_curvature",
    "evaluate_invariant",
    "integrate",
    "characteristic_integrals",
    "Perturbation",
    "random_perturbation",
    "connection_independence_check",
    "whitney_sum_check",
]

PLATEAU = 1.2
SUPPORT = 2.0
TOL_PROJ = 1e-10
TOL_CURV = 1e-8


class ProjectionError(ValueError):
    pass


def smooth_step(t):
    """C-infinity step: 1 for ``t <= 0``, 0 for ``t >= 1``."""
    t = np.asarray(t, dtype=float)
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        a = np.where(t < 1, np.exp(-1.0 / np.clip(1 - t, 1e-300, None)), 0.0)
        b = np.where(t > 0, np.exp(-1.0 / np.clip(t, 1e-300, None)), 0.0)
    # a + b > 0 for every finite t; NaN stays NaN
    return np.divide(a, a + b, out=np.full_like(t, np.nan), where=np.isfinite(t))


def bump(r, plateau: float = PLATEAU, support: float = SUPPORT):
    """1 on ``r <= plateau``, 0 on ``r >= support``, smooth in between; NaN maps to 0."""
    r = np.asarray(r, dtype=float)
    out = smooth_step((r - plateau) / (support - plateau))
    return np.where(np.isfinite(r), out, 0.0)


# -- charts ------------------------------------------------------------------


@dataclass(frozen=True)
class Chart:
    """A rectangular parameter domain ``prod [lo_k, hi_k]``.

    ``weight`` optionally gives the partition-of-unity function directly;
    otherwise the grid normalizes bump functions through its transitions.
    """

    extent: tuple[float, ...]
    orientation: int = 1
    weight: Callable | None = None

    @property
    def dim(self) -> int:
        return len(self.extent) // 2


@dataclass(frozen=True)
class ChartedGrid:
    """Charts sampled on ``resolution`` points per axis, with a partition of unity.

    ``transition(i, j, coords)`` maps chart-``i`` coordinates (last axis) to
    chart ``j``; points outside chart ``j`` may map to NaN.  Without a
    transition and with a single chart the weight is 1.
    """

    charts: tuple[Chart, ...]
    resolution: int
    transition: Callable | None = None
    plateau: float = PLATEAU
    support: float = SUPPORT

    def __post_init__(self):
        dims = {c.dim for c in self.charts}
        if len(dims) != 1:
            raise ValueError(f"charts of different dimensions {sorted(dims)}")
        for c in self.charts:
            if c.orientation not in (1, -1):
                raise ValueError(f"chart orientation must be +1 or -1, got {c.orientation}")
        if self.resolution < 3:
            raise ValueError("resolution must be at least 3")

    @property
    def dim(self) -> int:
        return self.charts[0].dim

    def axes(self, i: int) -> list[np.ndarray]:
        ext = self.charts[i].extent
        return [np.linspace(ext[2 * k], ext[2 * k + 1], self.resolution) for k in range(self.dim)]

    def spacing(self, i: int) -> list[float]:
        return [float(ax[1] - ax[0]) for ax in self.axes(i)]

    def quadrature(self, i: int) -> list[np.ndarray]:
        """Trapezoid weights per axis."""
        out = []
        for h in self.spacing(i):
            w = np.full(self.resolution, h)
            w[0] = w[-1] = h / 2
            out.append(w)
        return out

    def _uses_bumps(self, i: int) -> bool:
        return self.charts[i].weight is None and (len(self.charts) > 1 or self.transition is not None)

    def support_mask(self, i: int, coords: np.ndarray) -> np.ndarray:
        if self.charts[i].weight is not None:
            return np.asarray(self.charts[i].weight(coords)) > 0
        if not self._uses_bumps(i):
            return np.ones(coords.shape[:-1], dtype=bool)
        return np.linalg.norm(coords, axis=-1) < self.support

    def weight(self, i: int, coords: np.ndarray) -> np.ndarray:
        """Partition-of-unity function ``a_i`` at chart-``i`` coordinates."""
        chart = self.charts[i]
        if chart.weight is not None:
            return np.asarray(chart.weight(coords), dtype=float) * np.ones(coords.shape[:-1])
        if not self._uses_bumps(i):
            return np.ones(coords.shape[:-1])
        own = bump(np.linalg.norm(coords, axis=-1), self.plateau, self.support)
        total = np.zeros_like(own)
        for j in range(len(self.charts)):
            other = coords if j == i else self.transition(i, j, coords)
            total = total + bump(np.linalg.norm(other, axis=-1), self.plateau, self.support)
        with np.errstate(invalid="ignore", divide="ignore"):
            return np.where(own > 0, own / total, 0.0)

    def blocks(self, i: int, rows: int | None = None):
        """Slabs of ``rows`` grid rows along axis 0 (default: everything at once in 2D)."""
        n = self.resolution
        if rows is None:
            # about 3e5 points per slab keeps the 4D pipeline well under 1 GB
            rows = n if self.dim <= 2 else max(1, min(n, 300_000 // n ** (self.dim - 1)))
        for start in range(0, n, rows):
            yield Block(self, i, start, min(n, start + rows))


class Block:
    """Rows ``[start, stop)`` of chart ``i``, plus one halo row on each side.

    Finite differences are taken on the haloed slab and then cropped, so they
    coincide with differences on the full grid.  Everything handed to callers
    is restricted to the sample points where the chart weight is positive.
    """

    def __init__(self, grid: ChartedGrid, chart: int, start: int, stop: int):
        n = grid.resolution
        self.grid, self.chart = grid, chart
        lo, hi = max(0, start - 1), min(n, stop + 1)
        while hi - lo < 3:  # edge_order=2 needs three rows
            lo, hi = max(0, lo - 1), min(n, hi + 1)
        self.lo, self.hi, self.start, self.stop = lo, hi, start, stop
        axes = grid.axes(chart)
        self.spacing = grid.spacing(chart)
        self.ext_axes = [axes[0][lo:hi]] + axes[1:]
        self.ext_coords = np.stack(np.meshgrid(*self.ext_axes, indexing="ij"), axis=-1)
        inner = self.ext_coords[start - lo : stop - lo]
        self.mask = grid.support_mask(chart, inner)
        self.coords = inner[self.mask]
        quad = grid.quadrature(chart)
        q = quad[0][start:stop]
        for w in quad[1:]:
            q = np.multiply.outer(q, w)
        self.measure = (
            grid.weight(chart, self.coords) * q[self.mask] * grid.charts[chart].orientation
        )
        # flat positions of the sample points inside the haloed slab
        ext_shape = self.ext_coords.shape[:-1]
        local = np.nonzero(self.mask)
        self.rows = local[0]
        self.pos = (local[0] + start,) + local[1:]
        self.index = np.ravel_multi_index((local[0] + start - lo,) + local[1:], ext_shape)
        self.strides = [int(np.prod(ext_shape[a + 1 :])) for a in range(len(ext_shape))]
        self.n_ext = int(np.prod(ext_shape))
        self.cache: dict = {}

    @property
    def size(self) -> int:
        return len(self.index)

    def _flat(self, ext: np.ndarray) -> np.ndarray:
        dim = self.grid.dim
        return ext.reshape((self.n_ext,) + ext.shape[dim:])

    def crop(self, ext: np.ndarray) -> np.ndarray:
        return self._flat(ext)[self.index]

    def diff(self, ext: np.ndarray, axis: int) -> np.ndarray:
        """Second-order difference along ``axis``: centered inside, one-sided at the grid edge."""
        flat = self._flat(ext)
        k, s, h = self.index, self.strides[axis], self.spacing[axis]
        pos, last = self.pos[axis], self.grid.resolution - 1
        first, final = pos == 0, pos == last
        if not (first.any() or final.any()):
            return (flat[k + s] - flat[k - s]) / (2 * h)
        out = np.empty((len(k),) + flat.shape[1:], dtype=flat.dtype)
        mid = ~(first | final)
        km, kf, kl = k[mid], k[first], k[final]
        out[mid] = (flat[km + s] - flat[km - s]) / (2 * h)
        out[first] = (-3 * flat[kf] + 4 * flat[kf + s] - flat[kf + 2 * s]) / (2 * h)
        out[final] = (3 * flat[kl] - 4 * flat[kl - s] + flat[kl - 2 * s]) / (2 * h)
        return out


# -- projection fields --------------------------------------------------------


def frame_from_projection(p: np.ndarray, rank: int) -> np.ndarray:
    """``e`` with ``e e^H = p`` by pivoted Cholesky; ``e^H e = 1`` when ``p`` is a projection."""
    m = np.array(p, dtype=complex, copy=True)
    cols = []
    for _ in range(rank):
        d = np.real(np.diagonal(m, axis1=-2, axis2=-1))
        piv = np.argmax(d, axis=-1)
        val = np.take_along_axis(d, piv[..., None], axis=-1)[..., 0]
        idx = np.broadcast_to(piv[..., None, None], m.shape[:-1] + (1,))
        col = np.take_along_axis(m, idx, axis=-1)[..., 0] / np.sqrt(np.clip(val, 1e-300, None))[..., None]
        m -= col[..., :, None] * np.conj(col)[..., None, :]
        cols.append(col)
    return np.stack(cols, axis=-1)


def _h(a: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(a, -1, -2))


def _kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    m = np.broadcast_shapes(a.shape[:-2], b.shape[:-2])
    out = a[..., :, None, :, None] * b[..., None, :, None, :]
    return out.reshape(m + (a.shape[-2] * b.shape[-2], a.shape[-1] * b.shape[-1]))


class ProjectionField:
    """Node of a bundle expression; ``size`` is the ambient dimension."""

    size: int
    rank: int

    def values(self, block: Block) -> np.ndarray:
        """``P`` on the haloed slab, shape ``(..., size, size)``."""
        raise NotImplementedError

    def _memo(self, block: Block, key: str, compute):
        k = (id(self), key)
        if k not in block.cache:
            block.cache[k] = compute()
        return block.cache[k]

    def jet(self, block: Block):
        """``(P, [d_a P])`` at the block's sample points."""
        def compute():
            ext = self.values(block)
            return block.crop(ext), [block.diff(ext, a) for a in range(block.grid.dim)]
        return self._memo(block, "jet", compute)

    def _from_jet(self, block: Block):
        def compute():
            p, dp = self.jet(block)
            dim = block.grid.dim
            e, z, g, w = connection_from_jet(
                np.ascontiguousarray(p, dtype=complex), np.ascontiguousarray(np.stack(dp), dtype=complex), self.rank
            )
            pairs = [(a, b) for a in range(dim) for b in range(a + 1, dim)]
            return e, list(z), dict(zip(pairs, g)), list(w)
        return self._memo(block, "from_jet", compute)

    def frame(self, block: Block):
        """``(e, [Z_a])`` with ``P = e e^H`` and ``Z_a = e^H d_a P``."""
        e, z, _, _ = self._from_jet(block)
        return e, z

    def connection_data(self, block: Block):
        """``({(a, b): Z_a Z_b^H}, [Z_a e])`` for ``a < b``; all that curvature needs."""
        _, _, grams, omegas = self._from_jet(block)
        return grams, omegas

    def defect(self, block: Block) -> tuple[float, float]:
        """``(max |P^2 - P|, max |P - P^H|)`` over the block."""
        p, _ = self.jet(block)
        return float(np.max(np.abs(p @ p - p), initial=0.0)), float(np.max(np.abs(p - _h(p)), initial=0.0))

    # sugar
    def __add__(self, other):
        return DirectSum(self, other)

    def __matmul__(self, other):
        return TensorProduct(self, other)


class Leaf(ProjectionField):
    """``P = func(chart, coords)``, or ``v v^H / |v|^2`` when built with :meth:`from_vector`."""

    def __init__(self, func: Callable, size: int, rank: int, tol_proj: float = TOL_PROJ, name: str = "leaf"):
        self.func, self.size, self.rank, self.tol_proj, self.name = func, size, rank, tol_proj, name

    @classmethod
    def from_vector(cls, vfunc: Callable, size: int, name: str = "line") -> Leaf:
        def func(chart, coords):
            v = np.asarray(vfunc(chart, coords), dtype=complex)
            return v[..., :, None] * np.conj(v)[..., None, :] / np.sum(np.abs(v) ** 2, axis=-1)[..., None, None]
        return cls(func, size, 1, name=name)

    def values(self, block):
        return self._memo(block, "values", lambda: np.asarray(self.func(block.chart, block.ext_coords), dtype=complex))

    def jet(self, block):
        def compute():
            out = ProjectionField.jet(self, block)
            p = out[0]
            idem = float(np.max(np.abs(p @ p - p), initial=0.0))
            herm = float(np.max(np.abs(p - _h(p)), initial=0.0))
            if max(idem, herm) > self.tol_proj:
                raise ProjectionError(
                    f"{self.name}: |P^2-P| = {idem:.3g}, |P-P^H| = {herm:.3g} exceed {self.tol_proj:g}"
                )
            return out
        return self._memo(block, "checked_jet", compute)


class Constant(Leaf):
    def __init__(self, matrix, rank: int | None = None, name: str = "constant"):
        matrix = np.asarray(matrix, dtype=complex)
        if rank is None:
            rank = int(round(np.real(np.trace(matrix))))
        super().__init__(
            lambda chart, coords: np.broadcast_to(matrix, coords.shape[:-1] + matrix.shape),
            matrix.shape[0], rank, name=name,
        )


class Conjugate(ProjectionField):
    def __init__(self, inner: ProjectionField):
        self.inner, self.size, self.rank = inner, inner.size, inner.rank

    def values(self, block):
        return np.conj(self.inner.values(block))

    def jet(self, block):
        p, dp = self.inner.jet(block)
        return np.conj(p), [np.conj(d) for d in dp]

    def frame(self, block):
        e, z = self.inner.frame(block)
        return np.conj(e), [np.conj(x) for x in z]

    def connection_data(self, block):
        grams, omegas = self.inner.connection_data(block)
        return {k: np.conj(v) for k, v in grams.items()}, [np.conj(w) for w in omegas]


class Complement(ProjectionField):
    """``1 - P``."""

    def __init__(self, inner: ProjectionField):
        self.inner, self.size, self.rank = inner, inner.size, inner.size - inner.rank

    def values(self, block):
        return np.eye(self.size) - self.inner.values(block)

    def jet(self, block):
        def compute():
            p, dp = self.inner.jet(block)
            return np.eye(self.size) - p, [-d for d in dp]
        return self._memo(block, "jet", compute)


def _block_diag(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    m = a.shape[:-2]
    out = np.zeros(m + (a.shape[-2] + b.shape[-2], a.shape[-1] + b.shape[-1]), dtype=np.result_type(a, b))
    out[..., : a.shape[-2], : a.shape[-1]] = a
    out[..., a.shape[-2] :, a.shape[-1] :] = b
    return out


class DirectSum(ProjectionField):
    def __init__(self, first: ProjectionField, second: ProjectionField):
        self.first, self.second = first, second
        self.size = first.size + second.size
        self.rank = first.rank + second.rank

    def values(self, block):
        return _block_diag(self.first.values(block), self.second.values(block))

    def jet(self, block):
        (p, dp), (q, dq) = self.first.jet(block), self.second.jet(block)
        return _block_diag(p, q), [_block_diag(a, b) for a, b in zip(dp, dq)]

    def frame(self, block):
        def compute():
            (e1, z1), (e2, z2) = self.first.frame(block), self.second.frame(block)
            return _block_diag(e1, e2), [_block_diag(a, b) for a, b in zip(z1, z2)]
        return self._memo(block, "frame", compute)

    def connection_data(self, block):
        (g1, w1), (g2, w2) = self.first.connection_data(block), self.second.connection_data(block)
        return {k: _block_diag(g1[k], g2[k]) for k in g1}, [_block_diag(a, b) for a, b in zip(w1, w2)]


class TensorProduct(ProjectionField):
    """``P (x) Q``; frames multiply and ``Z = Z_P (x) e_Q^H + e_P^H (x) Z_Q``."""

    def __init__(self, first: ProjectionField, second: ProjectionField):
        self.first, self.second = first, second
        self.size = first.size * second.size
        self.rank = first.rank * second.rank

    def values(self, block):
        return _kron(self.first.values(block), self.second.values(block))

    def jet(self, block):
        (p, dp), (q, dq) = self.first.jet(block), self.second.jet(block)
        return _kron(p, q), [_kron(a, q) + _kron(p, b) for a, b in zip(dp, dq)]

    def frame(self, block):
        def compute():
            (e1, z1), (e2, z2) = self.first.frame(block), self.second.frame(block)
            e1h, e2h = _h(e1), _h(e2)
            return _kron(e1, e2), [_kron(a, e2h) + _kron(e1h, b) for a, b in zip(z1, z2)]
        return self._memo(block, "frame", compute)

    def connection_data(self, block):
        # expand (Z1 x e2^H + e1^H x Z2)(Z1 x e2^H + e1^H x Z2)^H using e^H e = 1
        def compute():
            (g1, w1), (g2, w2) = self.first.connection_data(block), self.second.connection_data(block)
            n = block.size
            i1 = np.broadcast_to(np.eye(self.first.rank), (n, self.first.rank, self.first.rank))
            i2 = np.broadcast_to(np.eye(self.second.rank), (n, self.second.rank, self.second.rank))
            grams = {
                (a, b): _kron(g1[a, b], i2) + _kron(w1[a], _h(w2[b])) + _kron(_h(w1[b]), w2[a]) + _kron(i1, g2[a, b])
                for a, b in g1
            }
            return grams, [_kron(x, i2) + _kron(i1, y) for x, y in zip(w1, w2)]
        return self._memo(block, "connection", compute)


class Materialized(ProjectionField):
    """Same jet as ``inner`` but frames built from the full ``size x size`` matrices.

    Bypasses the structured frame algebra of the other nodes; used to check it.
    """

    def __init__(self, inner: ProjectionField):
        self.inner, self.size, self.rank = inner, inner.size, inner.rank

    def values(self, block):
        return self.inner.values(block)

    def jet(self, block):
        return self.inner.jet(block)


class Twisted(ProjectionField):
    """``U P U^H`` with ``U = exp(i chi(x) H)``, ``chi`` supported in ``|x| < radius`` of one chart.

    No other chart carries weight there, so this is an isomorphic bundle whose
    Grassmann connection differs from that of ``P``.  ``H`` is a seeded random
    Hermitian matrix, so a direct sum gets its summands mixed.
    """

    def __init__(self, inner: ProjectionField, seed: int = 0, radius: float = 0.45, chart: int = 0):
        self.inner, self.size, self.rank = inner, inner.size, inner.rank
        self.radius, self.chart = radius, chart
        rng = np.random.default_rng(seed)
        h = rng.normal(size=(self.size, self.size)) + 1j * rng.normal(size=(self.size, self.size))
        lam, self.eigvecs = np.linalg.eigh(h + _h(h))
        # unit spectral norm: at most one radian of twist
        self.eigvals = lam / np.max(np.abs(lam))

    def unitary(self, chart: int, coords: np.ndarray) -> np.ndarray:
        if chart != self.chart:
            return np.broadcast_to(np.eye(self.size, dtype=complex), coords.shape[:-1] + (self.size, self.size))
        r = np.linalg.norm(coords, axis=-1)
        chi = smooth_step((r / self.radius - 0.3) / 0.7)
        phase = np.exp(1j * chi[..., None] * self.eigvals)
        return (self.eigvecs * phase[..., None, :]) @ _h(self.eigvecs)

    def values(self, block):
        def compute():
            u = self.unitary(block.chart, block.ext_coords)
            return u @ self.inner.values(block) @ _h(u)
        return self._memo(block, "values", compute)


# -- curvature ----------------------------------------------------------------


@dataclass(frozen=True)
class Perturbation:
    """An End(E)-valued 1-form ``A = P B P``; ``components(chart, coords)`` gives ``B_a``."""

    components: Callable
    chart: int = 0


def frame_curvature(pfield: ProjectionField, block: Block, perturbation: Perturbation | None = None) -> dict:
    """Curvature 2-form in the frame of ``P``: ``{mask: (M, k, k)}``."""
    dim = block.grid.dim
    grams, _ = pfield.connection_data(block)
    out = {}
    for i, j, mask in fm.basis_2forms(dim):
        x = grams[i, j]
        out[mask] = x - _h(x)
    if perturbation is not None and perturbation.chart == block.chart and block.size:
        # R' = R + P dA P + A ^ A for A = P B P
        e, _ = pfield.frame(block)
        p_ext = pfield.values(block)
        b_ext = np.asarray(perturbation.components(block.chart, block.ext_coords), dtype=complex)
        a_ext = [p_ext @ b_ext[..., k, :, :] @ p_ext for k in range(dim)]
        eh = _h(e)
        a_frame = [eh @ block.crop(a) @ e for a in a_ext]
        da = [[block.diff(a_ext[b], a) for b in range(dim)] for a in range(dim)]
        for i, j, mask in fm.basis_2forms(dim):
            curl = eh @ (da[i][j] - da[j][i]) @ e
            out[mask] = out[mask] + curl + a_frame[i] @ a_frame[j] - a_frame[j] @ a_frame[i]
    return out


@dataclass
class MatrixFormField:
    """Matrix-valued forms sampled on every chart of a grid.

    ``charts[i]`` is ``{mask: array}`` with arrays of shape
    ``(N,) * dim + (r, r)`` (the full grid, not masked).
    """

    grid: ChartedGrid
    charts: list
    rank: int

    def component(self, i: int, a: int, b: int) -> np.ndarray:
        sign = 1
        if a > b:
            a, b, sign = b, a, -1
        return sign * self.charts[i][(1 << a) | (1 << b)]


def grassmann_connection_curvature(pfield: ProjectionField, grid: ChartedGrid) -> MatrixFormField:
    """``R = P dP ^ dP P`` as explicit ``size x size`` matrices on the whole grid.

    Meant for small problems and checks; characteristic numbers go through
    :func:`characteristic_integrals`, which never forms ``R`` at full size.
    """
    out = []
    for i in range(len(grid.charts)):
        full = ChartedGrid(
            (Chart(grid.charts[i].extent, grid.charts[i].orientation, lambda c: np.ones(c.shape[:-1])),),
            grid.resolution,
        )
        block = Block(full, 0, 0, grid.resolution)
        p, dp = pfield.jet(block)
        shape = (grid.resolution,) * grid.dim + (pfield.size, pfield.size)
        comps = {}
        for a, b, mask in fm.basis_2forms(grid.dim):
            comps[mask] = (p @ (dp[a] @ dp[b] - dp[b] @ dp[a]) @ p).reshape(shape)
        out.append(comps)
    return MatrixFormField(grid, out, pfield.rank)


# -- invariant polynomials ----------------------------------------------------


@dataclass(frozen=True)
class InvariantPolynomial:
    """``kind`` is ``"ch"`` (uses ``n``), ``"p"`` (total Pontryagin) or ``"trace"``.

    ``"trace"`` is ``sum_j coeffs[j] tr(A^j)`` with no normalization.
    """

    kind: str
    n: int = 0
    coeffs: tuple = ()

    @property
    def name(self) -> str:
        if self.kind == "ch":
            return f"ch{self.n}"
        if self.kind == "p":
            return "p"
        return "trace[" + ",".join(map(str, self.coeffs)) + "]"


def chern_character(n: int) -> InvariantPolynomial:
    return InvariantPolynomial("ch", n)


def total_pontryagin() -> InvariantPolynomial:
    return InvariantPolynomial("p")


def trace_power(*coeffs) -> InvariantPolynomial:
    return InvariantPolynomial("trace", 0, tuple(coeffs))


def realify(a: np.ndarray) -> np.ndarray:
    re, im = np.real(a), np.imag(a)
    return np.concatenate(
        [np.concatenate([re, -im], axis=-1), np.concatenate([im, re], axis=-1)], axis=-2
    )


def evaluate_invariant(poly: InvariantPolynomial, curvature: dict, dim: int, rank: int | None = None) -> dict:
    """Pointwise value of ``poly`` on a matrix 2-form, as a scalar form ``{mask: array}``.

    ``curvature`` is ``{mask: (..., k, k)}``.  ``rank`` is the bundle rank,
    needed for ``ch0`` when the matrices act on a larger ambient space.
    """
    if not curvature:
        raise ValueError("empty curvature")
    sample = next(iter(curvature.values()))
    shape, k = sample.shape[:-2], sample.shape[-1]
    if poly.kind == "ch":
        if 2 * poly.n > dim:
            raise ValueError(f"ch{poly.n} has degree {2 * poly.n}, above the dimension {dim}")
        if poly.n == 0:
            return {0: np.full(shape, float(k if rank is None else rank))}
        power = fm.mat_power(fm.scale(curvature, 1j / (2 * np.pi)), poly.n, dim)
        tr = fm.mat_trace(power)
        return {m: np.real(v) / math.factorial(poly.n) for m, v in tr.items()}
    if poly.kind == "p":
        # realification is conjugate to diag(R, conj R), so det splits
        half = fm.det_one_plus(fm.scale(curvature, 1 / (2 * np.pi)), dim)
        return {m: np.real(v) for m, v in fm.wedge(half, {m: np.conj(v) for m, v in half.items()}, dim).items()}
    if poly.kind == "trace":
        out: dict = {}
        power = None
        for j, c in enumerate(poly.coeffs):
            if j == 0:
                term = {0: np.full(shape, float(k))}
            else:
                power = curvature if power is None else fm.mat_wedge(power, curvature, dim)
                term = fm.mat_trace(power)
            if c:
                out = fm.add(out, fm.scale(term, c))
        return out
    raise ValueError(f"unknown invariant kind {poly.kind!r}")


def top_component(form: dict, dim: int) -> np.ndarray | float:
    return form.get((1 << dim) - 1, 0.0)


def integrate(fields: Sequence[dict], grid: ChartedGrid) -> float:
    """``sum_i orientation_i int a_i omega_i`` for top-degree forms on full grids.

    ``fields[i]`` is a scalar form on chart ``i`` sampled on the whole grid
    (shape ``(N,) * dim``) or a callable of the coordinates.
    """
    if len(fields) != len(grid.charts):
        raise ValueError(f"{len(fields)} fields for {len(grid.charts)} charts")
    partial = []
    for i, f in enumerate(fields):
        chart = grid.charts[i]
        if chart.orientation not in (1, -1):
            raise ValueError("inconsistent orientation")
        coords = np.stack(np.meshgrid(*grid.axes(i), indexing="ij"), axis=-1)
        top = f(coords) if callable(f) else top_component(f, grid.dim)
        top = np.real(np.broadcast_to(top, coords.shape[:-1]))
        q = grid.quadrature(i)[0]
        for w in grid.quadrature(i)[1:]:
            q = np.multiply.outer(q, w)
        vals = grid.weight(i, coords) * q * top * chart.orientation
        partial.extend(np.sum(vals.reshape(grid.resolution, -1), axis=1))
    return math.fsum(partial)


def characteristic_integrals(
    pfield: ProjectionField,
    grid: ChartedGrid,
    polys: Mapping[str, InvariantPolynomial] | Sequence[InvariantPolynomial],
    perturbation: Perturbation | None = None,
    rows: int | None = None,
) -> dict[str, float]:
    """Integrals of top components of invariant polynomials of the curvature.

    Streams over slabs of the grid; the sum runs chart by chart and row by
    row with ``math.fsum``, so the result does not depend on block size.
    """
    if not isinstance(polys, Mapping):
        polys = {p.name: p for p in polys}
    dim = grid.dim
    partial: dict[str, list] = {name: [] for name in polys}
    for i in range(len(grid.charts)):
        for block in grid.blocks(i, rows):
            if not block.size:
                continue
            curv = frame_curvature(pfield, block, perturbation)
            row_index = block.rows
            for name, poly in polys.items():
                top = np.real(top_component(evaluate_invariant(poly, curv, dim, pfield.rank), dim))
                vals = np.broadcast_to(top, (block.size,)) * block.measure
                sums = np.bincount(row_index, weights=vals, minlength=block.stop - block.start)
                partial[name].extend(sums)
    return {name: math.fsum(v) for name, v in partial.items()}


# -- checks -------------------------------------------------------------------


def random_perturbation(size: int, dim: int, seed: int = 0, radius: float = 0.45, chart: int = 0) -> Perturbation:
    """Smooth ``B_a`` supported in ``|x| < radius`` of one chart, from a seeded generator."""
    rng = np.random.default_rng(seed)
    const = rng.normal(size=(dim, size, size)) + 1j * rng.normal(size=(dim, size, size))
    lin = rng.normal(size=(dim, dim, size, size)) + 1j * rng.normal(size=(dim, dim, size, size))
    freq = rng.uniform(1.0, 4.0, size=dim)

    def components(chart_index, coords):
        r = np.linalg.norm(coords, axis=-1)
        chi = smooth_step((r / radius - 0.3) / 0.7)
        wave = np.cos(coords @ freq)
        b = const[None] * wave[..., None, None, None]
        b = b + np.einsum("...c,acij->...aij", coords, lin)
        return chi[..., None, None, None] * b

    return Perturbation(components, chart)


@dataclass(frozen=True)
class CheckReport:
    values: Mapping[str, float]
    residual: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.residual <= self.tolerance

    def to_json(self) -> dict:
        return {
            **{k: float(v) for k, v in self.values.items()},
            "residual": float(self.residual),
            "tolerance": self.tolerance,
            "pass": self.passed,
        }


def connection_independence_check(
    pfield: ProjectionField,
    grid: ChartedGrid,
    seed: int | None = 0,
    tolerance: float = 1e-2,
    poly: InvariantPolynomial | None = None,
    perturbation: Perturbation | None = None,
) -> CheckReport:
    """``|int ch(R) - int ch(R')|`` for the Grassmann connection and ``P o d + A``.

    ``seed=None`` without an explicit perturbation means ``A = 0``.
    """
    poly = poly or chern_character(grid.dim // 2)
    if perturbation is None and seed is not None:
        perturbation = random_perturbation(pfield.size, grid.dim, seed)
    base = characteristic_integrals(pfield, grid, {"value": poly})["value"]
    moved = base if perturbation is None else characteristic_integrals(pfield, grid, {"value": poly}, perturbation)["value"]
    return CheckReport({"grassmann": base, "perturbed": moved}, abs(base - moved), tolerance)


def whitney_sum_check(
    p: ProjectionField,
    q: ProjectionField,
    grid: ChartedGrid,
    tolerance: float = 2e-3,
    twist_seed: int | None = 0,
) -> CheckReport:
    """Additivity of ``ch_k`` and multiplicativity of ``p`` on ``P + Q``.

    The block-diagonal connection on ``P + Q`` splits exactly, so ``ch_k`` is
    taken on a :class:`Twisted` copy that mixes the summands (``twist_seed=None``
    keeps the plain sum).  The total Pontryagin form is compared pointwise as
    ``p(P + Q)`` against the wedge ``p(P) ^ p(Q)`` before integrating.
    """
    dim = grid.dim
    s = DirectSum(p, q)
    values: dict[str, float] = {}
    worst = 0.0
    chs = {f"ch{k}": chern_character(k) for k in range(1, dim // 2 + 1)}
    whole = characteristic_integrals(s if twist_seed is None else Twisted(s, twist_seed), grid, chs)
    parts = [characteristic_integrals(f, grid, chs) for f in (p, q)]
    for name in chs:
        values[f"{name}(P+Q)"] = whole[name]
        values[f"{name}(P)+{name}(Q)"] = parts[0][name] + parts[1][name]
        worst = max(worst, abs(whole[name] - parts[0][name] - parts[1][name]))
    if dim >= 4:
        lhs, rhs = [], []
        for i in range(len(grid.charts)):
            for block in grid.blocks(i):
                if not block.size:
                    continue
                ps = evaluate_invariant(total_pontryagin(), frame_curvature(s, block), dim)
                pp = evaluate_invariant(total_pontryagin(), frame_curvature(p, block), dim)
                pq = evaluate_invariant(total_pontryagin(), frame_curvature(q, block), dim)
                lhs.append(float(np.sum(np.real(top_component(ps, dim)) * block.measure)))
                rhs.append(float(np.sum(np.real(top_component(fm.wedge(pp, pq, dim), dim)) * block.measure)))
        values["p(P+Q)"] = math.fsum(lhs)
        values["p(P)p(Q)"] = math.fsum(rhs)
        worst = max(worst, abs(values["p(P+Q)"] - values["p(P)p(Q)"]))
    return CheckReport(values, worst, tolerance)

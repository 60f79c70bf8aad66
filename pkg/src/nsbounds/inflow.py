"""Inlet velocity datum, its boundary norms, and the size functional Phi(h).

Two data kinds are supported: the analytic cosine profile
``A cos(pi y / 2L) cos(pi z / 2L) e1`` with closed-form norms, and velocity
samples on the closed uniform grid over ``[-L, L]^2``, integrated with
composite Simpson.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Union

import numpy as np

from ._quadrature import simpson_weights, tensor_reduce
from .geometry import ChannelGeometry

__all__ = [
    "DEFAULT_COMPAT_TOL",
    "InflowError",
    "AnalyticInflow",
    "SampledInflow",
    "InflowDatum",
    "InflowNorms",
    "CompatibilityReport",
    "compatibility_check",
    "inflow_norms",
    "phi_of_h",
    "phi_corollary_display",
    "grid_derivative",
    "PHI_DISCREPANCY_WARNING",
]

DEFAULT_COMPAT_TOL = 1e-8

PHI_DISCREPANCY_WARNING = (
    "phi-factor-L: for the cosine inflow profile, Phi(h) evaluated from its "
    "defining formula is sqrt(2L) A [(1+M) L/(L-a) + pi/sqrt(2)], while the "
    "drag/lift corollary states sqrt(2L) A [(1+M)/(L-a) + pi/(sqrt(2) L)]; the "
    "two differ by a factor L. The certificate uses the former; both values "
    "are reported (phi, phi_corollary_display)."
)


class InflowError(ValueError):
    pass


@dataclass(frozen=True)
class AnalyticInflow:
    """Cosine profile of amplitude ``A`` along ``e1``."""

    amplitude: float

    def __post_init__(self):
        if not (math.isfinite(self.amplitude) and self.amplitude >= 0):
            raise InflowError(f"amplitude must be finite and >= 0, got {self.amplitude}")

    def scaled(self, c: float) -> "AnalyticInflow":
        return AnalyticInflow(c * self.amplitude)


@dataclass(frozen=True)
class SampledInflow:
    """Velocity samples ``values[i, j] = h(y_i, z_j)`` on the closed grid.

    Nodes are ``y_i = -L + 2L i / (n_y - 1)`` and likewise for ``z``.
    """

    values: np.ndarray = field(repr=False)
    compat_tol: float = DEFAULT_COMPAT_TOL
    source: str | None = None

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 3 or v.shape[2] != 3:
            raise InflowError(f"values must have shape (n_y, n_z, 3), got {v.shape}")
        ny, nz = v.shape[:2]
        for name, k in (("n_y", ny), ("n_z", nz)):
            if k < 3:
                raise InflowError(f"grid too coarse: {name}={k} < 3")
            if k % 2 == 0:
                raise InflowError(f"{name}={k} must be odd for Simpson quadrature")
        if not np.all(np.isfinite(v)):
            raise InflowError("values contain non-finite entries")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def n_y(self) -> int:
        return self.values.shape[0]

    @property
    def n_z(self) -> int:
        return self.values.shape[1]

    def scaled(self, c: float) -> "SampledInflow":
        return SampledInflow(c * self.values, self.compat_tol, self.source)

    @classmethod
    def from_function(
        cls,
        fn: Callable[[np.ndarray, np.ndarray], np.ndarray],
        L: float,
        n_y: int,
        n_z: int | None = None,
        compat_tol: float = DEFAULT_COMPAT_TOL,
    ) -> "SampledInflow":
        """Sample ``fn(Y, Z) -> (..., 3)`` on the closed grid."""
        n_z = n_y if n_z is None else n_z
        y = np.linspace(-L, L, n_y)
        z = np.linspace(-L, L, n_z)
        Y, Z = np.meshgrid(y, z, indexing="ij")
        return cls(np.asarray(fn(Y, Z), dtype=float), compat_tol)

    @classmethod
    def from_csv(
        cls, path: Union[str, Path], L: float, compat_tol: float = DEFAULT_COMPAT_TOL
    ) -> "SampledInflow":
        """Read a ``y,z,h1,h2,h3`` file, row-major over the tensor grid (z fastest)."""
        path = Path(path)
        with path.open(newline="") as fh:
            reader = csv.reader(fh)
            header = [s.strip() for s in next(reader, [])]
            if header != ["y", "z", "h1", "h2", "h3"]:
                raise InflowError(f"{path}: header must be 'y,z,h1,h2,h3', got {header}")
            rows = []
            for lineno, row in enumerate(reader, start=2):
                if not row or all(not s.strip() for s in row):
                    continue
                if len(row) != 5:
                    raise InflowError(f"{path}:{lineno}: expected 5 columns, got {len(row)}")
                try:
                    rows.append([float(s) for s in row])
                except ValueError as exc:
                    raise InflowError(f"{path}:{lineno}: {exc}") from None
        data = np.array(rows, dtype=float).reshape(-1, 5)
        ys = np.unique(data[:, 0])
        zs = np.unique(data[:, 1])
        ny, nz = len(ys), len(zs)
        if ny * nz != len(data):
            raise InflowError(f"{path}: {len(data)} rows do not form a {ny}x{nz} grid")
        tol = 1e-9 * L
        if not (
            np.allclose(data[:, 0], np.repeat(np.linspace(-L, L, ny), nz), atol=tol, rtol=0)
            and np.allclose(data[:, 1], np.tile(np.linspace(-L, L, nz), ny), atol=tol, rtol=0)
        ):
            raise InflowError(
                f"{path}: nodes are not the row-major uniform grid over [-L, L]^2 with L={L}"
            )
        return cls(data[:, 2:].reshape(ny, nz, 3), compat_tol, str(path))

    def to_csv(self, path: Union[str, Path], L: float) -> None:
        y = np.linspace(-L, L, self.n_y)
        z = np.linspace(-L, L, self.n_z)
        with Path(path).open("w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["y", "z", "h1", "h2", "h3"])
            for i in range(self.n_y):
                for j in range(self.n_z):
                    w.writerow([repr(float(y[i])), repr(float(z[j]))]
                               + [repr(float(v)) for v in self.values[i, j]])


InflowDatum = Union[AnalyticInflow, SampledInflow]


@dataclass(frozen=True)
class InflowNorms:
    """``||h||``, ``||grad h||`` and ``||dh2/dy + dh3/dz||`` in L^2 of the inlet."""

    l2: float
    grad_l2: float
    div_l2: float

    def scaled(self, c: float) -> "InflowNorms":
        return InflowNorms(c * self.l2, c * self.grad_l2, c * self.div_l2)


@dataclass(frozen=True)
class CompatibilityReport:
    ok: bool
    max_boundary: float = 0.0
    threshold: float = 0.0
    offending: tuple[tuple[int, int, float], ...] = ()

    def describe(self) -> str:
        if self.ok:
            return "inflow vanishes on the inlet boundary"
        shown = ", ".join(f"({i},{j}): |h|={m:.3e}" for i, j, m in self.offending[:10])
        more = "" if len(self.offending) <= 10 else f" and {len(self.offending) - 10} more"
        return (
            f"inflow does not vanish on the inlet boundary (threshold {self.threshold:.3e}): "
            f"{shown}{more}"
        )


def compatibility_check(datum: InflowDatum, geom: ChannelGeometry | None = None) -> CompatibilityReport:
    """Check that ``h`` vanishes on the boundary of the inlet face.

    For sampled data the tolerance is ``compat_tol * max |h|`` over the grid.
    """
    if isinstance(datum, AnalyticInflow):
        return CompatibilityReport(True)
    v = datum.values
    mag = np.linalg.norm(v, axis=2)
    scale = float(mag.max())
    threshold = datum.compat_tol * scale
    mask = np.zeros(mag.shape, dtype=bool)
    mask[0, :] = mask[-1, :] = mask[:, 0] = mask[:, -1] = True
    bad = np.argwhere(mask & (mag > threshold))
    offending = tuple((int(i), int(j), float(mag[i, j])) for i, j in bad)
    return CompatibilityReport(
        not offending, float(mag[mask].max()), threshold, offending
    )


# Fourth-order one-sided first-derivative stencil.
_ONE_SIDED = np.array([-25.0, 48.0, -36.0, 16.0, -3.0]) / 12.0


def grid_derivative(f: np.ndarray, h: float, axis: int) -> np.ndarray:
    """First derivative along ``axis``, fourth order everywhere.

    Central five-point stencil in the interior, one-sided five-point stencils
    on the two outermost layers at each end. Needs at least 5 nodes along
    ``axis``; with 3 nodes second-order stencils are used.
    """
    f = np.moveaxis(np.asarray(f, dtype=float), axis, 0)
    n = f.shape[0]
    g = np.empty_like(f)
    if n < 5:
        g[1:-1] = (f[2:] - f[:-2]) / (2 * h)
        g[0] = (-3 * f[0] + 4 * f[1] - f[2]) / (2 * h)
        g[-1] = (3 * f[-1] - 4 * f[-2] + f[-3]) / (2 * h)
        return np.moveaxis(g, 0, axis)
    g[2:-2] = (f[:-4] - 8 * f[1:-3] + 8 * f[3:-1] - f[4:]) / (12 * h)
    c = _ONE_SIDED.reshape((5,) + (1,) * (f.ndim - 1))
    if n >= 6:
        g[0] = (c * f[0:5]).sum(axis=0) / h
        g[1] = (c * f[1:6]).sum(axis=0) / h
        g[-1] = -(c * f[-1:-6:-1]).sum(axis=0) / h
        g[-2] = -(c * f[-2:-7:-1]).sum(axis=0) / h
    else:
        # n == 5: the second layer is the interior point reached by the central stencil
        g[0] = (c * f[0:5]).sum(axis=0) / h
        g[-1] = -(c * f[::-1]).sum(axis=0) / h
        g[1] = (-3 * f[0] - 10 * f[1] + 18 * f[2] - 6 * f[3] + f[4]) / (12 * h)
        g[-2] = -(-3 * f[-1] - 10 * f[-2] + 18 * f[-3] - 6 * f[-4] + f[-5]) / (12 * h)
    return np.moveaxis(g, 0, axis)


def inflow_norms(datum: InflowDatum, geom: ChannelGeometry) -> InflowNorms:
    """The three inlet norms entering Phi(h)."""
    L = geom.L
    if isinstance(datum, AnalyticInflow):
        A = datum.amplitude
        # int cos^2(pi s / 2L) ds over (-L, L) = L per axis
        return InflowNorms(l2=A * L, grad_l2=A * math.pi / math.sqrt(2.0), div_l2=0.0)

    report = compatibility_check(datum, geom)
    if not report.ok:
        raise InflowError(report.describe())
    v = datum.values
    ny, nz = datum.n_y, datum.n_z
    hy = 2 * L / (ny - 1)
    hz = 2 * L / (nz - 1)
    w = [simpson_weights(ny, -L, L), simpson_weights(nz, -L, L)]
    dy = grid_derivative(v, hy, axis=0)
    dz = grid_derivative(v, hz, axis=1)
    sq = np.einsum("ijk,ijk->ij", v, v)
    grad_sq = np.einsum("ijk,ijk->ij", dy, dy) + np.einsum("ijk,ijk->ij", dz, dz)
    div = dy[:, :, 1] + dz[:, :, 2]
    return InflowNorms(
        l2=math.sqrt(max(tensor_reduce(sq, w), 0.0)),
        grad_l2=math.sqrt(max(tensor_reduce(grad_sq, w), 0.0)),
        div_l2=math.sqrt(max(tensor_reduce(div * div, w), 0.0)),
    )


def phi_of_h(norms: InflowNorms, M: float, geom: ChannelGeometry) -> float:
    """Size functional bounding the Dirichlet norm of the solenoidal extension."""
    L, a = geom.L, geom.a
    return math.sqrt(2.0 * L) * (
        (1.0 + M) / (L - a) * norms.l2 + norms.grad_l2 + M * norms.div_l2
    )


def phi_corollary_display(amplitude: float, M: float, geom: ChannelGeometry) -> float:
    """Phi of the cosine profile in the form printed with the drag/lift corollary."""
    L, a = geom.L, geom.a
    return math.sqrt(2.0 * L) * ((1.0 + M) / (L - a) + math.pi / (math.sqrt(2.0) * L)) * amplitude

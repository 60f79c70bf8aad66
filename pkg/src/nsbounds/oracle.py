"""Brute-force numerical checks for the analytic constants.

Three independent tools: the lowest Dirichlet eigenvalue of the 7-point
finite-difference Laplacian on a box, tensor-product composite Simpson
quadrature, and central-difference divergence of a vector field.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
import scipy.fft
import scipy.sparse as sp

from ._quadrature import simpson_weights, tensor_reduce

__all__ = [
    "BoxDomain",
    "OracleError",
    "EigenResult",
    "analytic_box_eigenvalue",
    "dirichlet_laplacian",
    "box_eigenvalue_fd",
    "observed_order",
    "simpson_nd",
    "grid_points",
    "divergence_residual_fd",
    "divergence_residual_jacobian",
    "piecewise_simpson_axis",
    "field_norms",
]


class OracleError(RuntimeError):
    pass


@dataclass(frozen=True)
class BoxDomain:
    """Axis-aligned box ``prod_i (lo_i, hi_i)``."""

    lo: tuple[float, ...]
    hi: tuple[float, ...]

    def __post_init__(self):
        if len(self.lo) != len(self.hi):
            raise ValueError("lo and hi must have the same length")
        for l, h in zip(self.lo, self.hi):
            if not h > l:
                raise ValueError(f"empty box extent ({l}, {h})")

    @property
    def lengths(self) -> tuple[float, ...]:
        return tuple(h - l for l, h in zip(self.lo, self.hi))

    @property
    def dim(self) -> int:
        return len(self.lo)

    @classmethod
    def cube(cls, lo: float, hi: float, dim: int = 3) -> "BoxDomain":
        return cls((lo,) * dim, (hi,) * dim)


def _per_axis(n, dim: int) -> tuple[int, ...]:
    if np.isscalar(n):
        n = (int(n),) * dim
    n = tuple(int(k) for k in n)
    if len(n) != dim:
        raise ValueError(f"expected {dim} grid sizes, got {len(n)}")
    if min(n) < 3:
        raise ValueError(f"grid sizes must be >= 3, got {n}")
    return n


def analytic_box_eigenvalue(box: BoxDomain) -> float:
    """Lowest Dirichlet eigenvalue of ``-Laplace`` on the box."""
    return sum(math.pi ** 2 / ell ** 2 for ell in box.lengths)


# ---------------------------------------------------------------- eigenvalues


def dirichlet_laplacian(box: BoxDomain, n) -> sp.csr_matrix:
    """Sparse 7-point (in 3D) Dirichlet Laplacian on ``n`` interior points per axis."""
    n = _per_axis(n, box.dim)
    mats = []
    for k, ell in zip(n, box.lengths):
        h = ell / (k + 1)
        mats.append(
            sp.diags(
                [-np.ones(k - 1), 2.0 * np.ones(k), -np.ones(k - 1)], [-1, 0, 1]
            ).tocsr()
            / h ** 2
        )
    A = None
    for i, Ti in enumerate(mats):
        term = None
        for j, k in enumerate(n):
            f = Ti if i == j else sp.identity(k, format="csr")
            term = f if term is None else sp.kron(term, f, format="csr")
        A = term if A is None else A + term
    return A.tocsr()


def _apply_laplacian(u: np.ndarray, hs: Sequence[float]) -> np.ndarray:
    out = np.zeros_like(u)
    for axis, h in enumerate(hs):
        up = np.pad(u, [(1, 1) if a == axis else (0, 0) for a in range(u.ndim)])
        lo = [slice(None)] * u.ndim
        hi = [slice(None)] * u.ndim
        lo[axis] = slice(0, -2)
        hi[axis] = slice(2, None)
        out += (2.0 * u - up[tuple(lo)] - up[tuple(hi)]) / h ** 2
    return out


def _dst_solver(n: tuple[int, ...], hs: Sequence[float]):
    # T = tridiag(-1, 2, -1) has eigenvalues 4 sin^2(k pi / (2(n+1))) in the DST-I basis.
    lam = np.zeros(n)
    for axis, (k, h) in enumerate(zip(n, hs)):
        mu = 4.0 * np.sin(np.arange(1, k + 1) * np.pi / (2 * (k + 1))) ** 2 / h ** 2
        shape = [1] * len(n)
        shape[axis] = k
        lam = lam + mu.reshape(shape)

    def solve(rhs):
        return scipy.fft.idstn(scipy.fft.dstn(rhs, type=1) / lam, type=1)

    return solve


def _amg_cg_solver(box: BoxDomain, n: tuple[int, ...], rtol: float):
    import pyamg
    import scipy.sparse.linalg as spla

    A = dirichlet_laplacian(box, n)
    M = pyamg.smoothed_aggregation_solver(A).aspreconditioner()

    def solve(rhs, guess=None):
        x0 = None if guess is None else guess.ravel()
        x, info = spla.cg(A, rhs.ravel(), x0=x0, rtol=rtol, M=M, maxiter=1000)
        if info != 0:
            raise OracleError(f"inner CG did not converge (info={info})")
        return x.reshape(n)

    return solve


@dataclass(frozen=True)
class EigenResult:
    value: float
    iterations: int
    residual: float
    n: tuple[int, ...]
    h: tuple[float, ...]


def box_eigenvalue_fd(
    box: BoxDomain,
    n,
    tol: float = 1e-10,
    maxiter: int = 500,
    solver: str = "dst",
) -> EigenResult:
    """Smallest eigenvalue of the FD Dirichlet Laplacian by inverse power iteration.

    Parameters
    ----------
    box : BoxDomain
    n : int or sequence of int
        Interior grid points per axis.
    tol : float
        Stop when ``||A x - lam x|| <= tol * lam * ||x||``.
    solver : {"dst", "amg-cg"}
        Inner solve: direct fast Poisson solve by type-I DST, or conjugate
        gradients preconditioned with smoothed-aggregation AMG.
    """
    n = _per_axis(n, box.dim)
    hs = tuple(ell / (k + 1) for k, ell in zip(n, box.lengths))
    if solver == "dst":
        dst = _dst_solver(n, hs)
        solve = lambda rhs, guess: dst(rhs)  # noqa: E731
    elif solver == "amg-cg":
        solve = _amg_cg_solver(box, n, rtol=min(1e-3 * tol, 1e-12))
    else:
        raise ValueError(f"unknown solver {solver!r}")

    x = np.ones(n)
    x /= np.linalg.norm(x)
    lam = float(np.vdot(x, _apply_laplacian(x, hs)))
    res = math.inf
    for it in range(1, maxiter + 1):
        y = solve(x, x / lam)
        x = y / np.linalg.norm(y)
        Ax = _apply_laplacian(x, hs)
        lam = float(np.vdot(x, Ax))
        res = float(np.linalg.norm(Ax - lam * x)) / lam
        if res <= tol:
            return EigenResult(lam, it, res, n, hs)
    raise OracleError(
        f"inverse iteration did not reach residual {tol:g} in {maxiter} steps "
        f"(last residual {res:.3e})"
    )


def observed_order(err_coarse: float, err_fine: float, h_coarse: float, h_fine: float) -> float:
    """Convergence order ``log(e_c / e_f) / log(h_c / h_f)``."""
    return math.log(err_coarse / err_fine) / math.log(h_coarse / h_fine)


# ---------------------------------------------------------------- quadrature


def simpson_nd(sampler: Callable[..., np.ndarray], box: BoxDomain, n) -> float:
    """Tensor-product composite Simpson integral of ``sampler`` over ``box``.

    ``sampler`` receives one coordinate array per axis (``indexing="ij"``
    meshgrid) and returns the integrand values with the same shape.
    ``n`` holds odd node counts, boundary nodes included.
    """
    n = _per_axis(n, box.dim)
    axes = [np.linspace(l, h, k) for l, h, k in zip(box.lo, box.hi, n)]
    weights = [simpson_weights(k, l, h) for l, h, k in zip(box.lo, box.hi, n)]
    grids = np.meshgrid(*axes, indexing="ij")
    vals = np.broadcast_to(np.asarray(sampler(*grids), dtype=float), grids[0].shape)
    return tensor_reduce(vals, weights)


# ---------------------------------------------------------------- divergence


def grid_points(box: BoxDomain, n) -> np.ndarray:
    """Nodes of a closed tensor grid as an ``(N, dim)`` array."""
    n = _per_axis(n, box.dim)
    axes = [np.linspace(l, h, k) for l, h, k in zip(box.lo, box.hi, n)]
    return np.stack([g.ravel() for g in np.meshgrid(*axes, indexing="ij")], axis=1)


def divergence_residual_fd(
    field: Callable[[np.ndarray], np.ndarray],
    box: BoxDomain | None = None,
    n=None,
    step: float = 1e-3,
    *,
    points: np.ndarray | None = None,
) -> float:
    """Max over sample points of the central-difference divergence ``|div F|``.

    ``field`` maps an ``(N, 3)`` array of points to ``(N, 3)`` vectors.
    Points are the closed grid on ``box`` unless ``points`` is given.
    """
    if not step > 0:
        raise ValueError("step must be positive")
    if points is None:
        if box is None or n is None:
            raise ValueError("give either box and n, or points")
        points = grid_points(box, n)
    pts = np.asarray(points, dtype=float)
    div = np.zeros(len(pts))
    for k in range(pts.shape[1]):
        e = np.zeros(pts.shape[1])
        e[k] = step
        div += (field(pts + e)[:, k] - field(pts - e)[:, k]) / (2.0 * step)
    return float(np.max(np.abs(div))) if len(div) else 0.0


def divergence_residual_jacobian(
    jacobian: Callable[[np.ndarray], np.ndarray], points: np.ndarray
) -> float:
    """Max ``|trace J|`` from an analytic Jacobian returning ``(N, 3, 3)``."""
    J = jacobian(np.asarray(points, dtype=float))
    return float(np.max(np.abs(np.trace(J, axis1=1, axis2=2)))) if len(J) else 0.0


# ---------------------------------------------------------------- field norms


def piecewise_simpson_axis(breaks: Sequence[float], counts: Sequence[int]):
    """Nodes and weights of composite Simpson rules glued at ``breaks``.

    Piece ``k`` spans ``breaks[k]..breaks[k+1]`` with ``counts[k]`` (odd)
    nodes; shared endpoints are merged and their weights added, so
    integrands with kinks at the breakpoints keep full order.
    """
    if len(counts) != len(breaks) - 1:
        raise ValueError("need one node count per piece")
    nodes, weights = [], []
    for k, cnt in enumerate(counts):
        lo, hi = breaks[k], breaks[k + 1]
        x = np.linspace(lo, hi, cnt)
        w = simpson_weights(cnt, lo, hi)
        if nodes:
            weights[-1][-1] += w[0]
            x, w = x[1:], w[1:]
        nodes.append(x)
        weights.append(w.copy())
    return np.concatenate(nodes), np.concatenate(weights)


def field_norms(
    evaluate: Callable[[np.ndarray], tuple[np.ndarray, np.ndarray]],
    axes: Sequence[tuple[np.ndarray, np.ndarray]],
    p: float = 3.0,
) -> tuple[float, float]:
    """``(||F||_{L^p}, ||grad F||_{L^2})`` by tensor Simpson over ``axes``.

    ``evaluate`` maps ``(N, 3)`` points to the values ``(N, 3)`` and the
    Jacobian ``(N, 3, 3)``. ``axes`` holds ``(nodes, weights)`` per coordinate, e.g. from
    :func:`piecewise_simpson_axis`. Evaluation runs in slabs along the first
    axis to bound memory; slab sums are reduced in a fixed order.
    """
    (x, wx), (y, wy), (z, wz) = axes
    Y, Z = np.meshgrid(y, z, indexing="ij")
    yz = np.stack([Y.ravel(), Z.ravel()], axis=1)
    lp_slab = np.empty(len(x))
    h1_slab = np.empty(len(x))
    for i, xi in enumerate(x):
        pts = np.column_stack([np.full(len(yz), xi), yz])
        F, J = evaluate(pts)
        fp = (np.sqrt(np.einsum("ij,ij->i", F, F)) ** p).reshape(len(y), len(z))
        g2 = np.einsum("nij,nij->n", J, J).reshape(len(y), len(z))
        lp_slab[i] = tensor_reduce(fp, [wy, wz])
        h1_slab[i] = tensor_reduce(g2, [wy, wz])
    lp = tensor_reduce(lp_slab, [wx]) ** (1.0 / p)
    h1 = math.sqrt(tensor_reduce(h1_slab, [wx]))
    return lp, h1

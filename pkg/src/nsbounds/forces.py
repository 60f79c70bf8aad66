"""Solenoidal extensions of e1/e3 around the obstacle and drag/lift bounds.

The fields ``q_i = 1/2 curl(xi (e_i x r))`` equal ``e_i`` on the obstacle box,
vanish outside a slightly inflated box and are divergence-free. Their norms
feed a volume-integral bound on the drag and lift. The evaluators are exposed
so a caller holding an external flow field can integrate the volume formula
``-int (2 eta e(u) : grad q_i + (u . grad u) . q_i)`` directly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import ChannelGeometry, bogovskii_M, conda_check, validate
from .inflow import AnalyticInflow, inflow_norms, phi_of_h
from .wellposedness import Certificate, FluidParams, certify

__all__ = [
    "ForceError",
    "NotCertifiedError",
    "phi_eps_eval",
    "default_eps",
    "ExtensionField",
    "QNormBounds",
    "q_norm_bounds",
    "q_norm_bounds_shell_corrected",
    "drag_lift_bound_general",
    "psi_bound",
    "finale_amplitude_limit",
    "finale_gradient_bound",
    "ForceBounds",
    "force_bounds",
    "ForceReport",
    "force_certificate",
    "SHELL_WARNING",
]

SHELL_WARNING = (
    "q-shell-measure: the closed-form q-field norm bounds take 8abc*eps^3 as the "
    "volume of the cutoff transition shell, which is 8abc((1+eps)^3 - 1); they "
    "can be smaller than the true norms when eps = (L-a)/(2a) is small. "
    "Shell-corrected bounds are reported under *_corrected."
)


class ForceError(ValueError):
    pass


class NotCertifiedError(RuntimeError):
    def __init__(self, certificate: Certificate):
        self.certificate = certificate
        super().__init__(
            f"inflow not certified: Phi={certificate.phi:.6g} > threshold={certificate.threshold:.6g}"
        )


def phi_eps_eval(eps: float, t):
    """Piecewise-cubic C^1 cutoff ``phi_eps`` and its first two derivatives.

    ``phi_eps = 1`` on ``[-1, 1]``, ``0`` for ``|t| >= 1 + eps``, cubic in
    between. The second derivative jumps at ``|t| in {1, 1 + eps}``; there the
    value of the cubic piece is returned, so the transition pieces are treated
    as closed.

    Returns
    -------
    value, d1, d2 : ndarray
        Same shape as ``t``.
    """
    if not eps > 0:
        raise ValueError("eps must be positive")
    t = np.asarray(t, dtype=float)
    s = np.abs(t)
    value = np.where(s <= 1.0, 1.0, 0.0)
    d1 = np.zeros_like(s)
    d2 = np.zeros_like(s)
    # u in [0, 1] across the transition; phi = 1 - 3u^2 + 2u^3 there, which is
    # exactly 1 at u = 0 and exactly 0 at u = 1
    mid = (s >= 1.0) & (s <= 1.0 + eps)
    u = (s[mid] - 1.0) / eps
    value[mid] = 1.0 - u * u * (3.0 - 2.0 * u)
    d1[mid] = np.sign(t[mid]) * 6.0 * u * (u - 1.0) / eps
    d2[mid] = (12.0 * u - 6.0) / eps ** 2
    if value.ndim == 0:
        return float(value), float(d1), float(d2)
    return value, d1, d2


def default_eps(geom: ChannelGeometry) -> float:
    return (geom.L - geom.a) / (2.0 * geom.a)


_AXES = {1: 0, 3: 2, "e1": 0, "e3": 2}


class ExtensionField:
    """Divergence-free field equal to ``e_axis`` on the box ``P``.

    Parameters
    ----------
    geom : ChannelGeometry
    axis : {1, 3, "e1", "e3"}
    eps : float, optional
        Cutoff width; defaults to ``(L - a) / (2a)``, which is also the
        largest accepted value.
    """

    def __init__(self, geom: ChannelGeometry, axis=1, eps: float | None = None):
        validate(geom)
        if axis not in _AXES:
            raise ValueError(f"axis must be one of 1, 3, 'e1', 'e3'; got {axis!r}")
        bound = default_eps(geom)
        eps = bound if eps is None else float(eps)
        if not (0 < eps <= bound * (1 + 1e-12)):
            raise ValueError(f"eps={eps} outside (0, (L-a)/(2a)] = (0, {bound}]")
        self.geom = geom
        self.eps = eps
        self.k = _AXES[axis]
        self.scales = np.array([geom.a, geom.b, geom.c])

    @property
    def support(self) -> tuple[np.ndarray, np.ndarray]:
        half = (1.0 + self.eps) * self.scales
        return -half, half

    def cutoff(self, points: np.ndarray):
        """``xi``, its gradient ``(N, 3)`` and Hessian ``(N, 3, 3)``."""
        p = np.atleast_2d(np.asarray(points, dtype=float))
        f, d, dd = [], [], []
        for j in range(3):
            v, g, h = phi_eps_eval(self.eps, p[:, j] / self.scales[j])
            f.append(v)
            d.append(g / self.scales[j])
            dd.append(h / self.scales[j] ** 2)
        xi = f[0] * f[1] * f[2]
        grad = np.empty((len(p), 3))
        hess = np.empty((len(p), 3, 3))
        for i in range(3):
            others = [f[m] for m in range(3) if m != i]
            grad[:, i] = d[i] * others[0] * others[1]
            hess[:, i, i] = dd[i] * others[0] * others[1]
            for j in range(i + 1, 3):
                (rest,) = [f[m] for m in range(3) if m not in (i, j)]
                hess[:, i, j] = hess[:, j, i] = d[i] * d[j] * rest
        return xi, grad, hess

    def __call__(self, points: np.ndarray) -> np.ndarray:
        """Field values at ``(N, 3)`` points."""
        r = np.atleast_2d(np.asarray(points, dtype=float))
        xi, grad, _ = self.cutoff(r)
        # q = xi e_k + 1/2 grad xi x (e_k x r) = e_k (xi + r.grad xi / 2) - r d_k xi / 2
        q = -0.5 * r * grad[:, self.k, None]
        q[:, self.k] += xi + 0.5 * np.einsum("ij,ij->i", r, grad)
        return q

    def jacobian(self, points: np.ndarray) -> np.ndarray:
        """``J[n, i, j] = d q_i / d x_j`` at ``(N, 3)`` points."""
        return self.evaluate(points)[1]

    def evaluate(self, points: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Field values and Jacobian from one cutoff evaluation."""
        r = np.atleast_2d(np.asarray(points, dtype=float))
        xi, grad, hess = self.cutoff(r)
        k = self.k
        q = -0.5 * r * grad[:, k, None]
        q[:, k] += xi + 0.5 * np.einsum("ij,ij->i", r, grad)
        J = -0.5 * r[:, :, None] * hess[:, k, None, :]
        J -= 0.5 * grad[:, k, None, None] * np.eye(3)[None]
        J[:, k, :] += 1.5 * grad + 0.5 * np.einsum("nm,nmj->nj", r, hess)
        return q, J


@dataclass(frozen=True)
class QNormBounds:
    q1_l3: float
    q3_l3: float
    q1_h1: float
    q3_h1: float


def _q_bounds(geom: ChannelGeometry, shell_factor: float) -> QNormBounds:
    L, a, b, c = geom.L, geom.a, geom.b, geom.c
    S = math.sqrt(1 / a ** 2 + 1 / b ** 2 + 1 / c ** 2)
    Xa = math.sqrt(64 / (9 * a ** 2) + 1 / b ** 2 + 1 / c ** 2)
    Xb = math.sqrt(1 / a ** 2 + 64 / (9 * b ** 2) + 1 / c ** 2)
    Xc = math.sqrt(1 / a ** 2 + 1 / b ** 2 + 64 / (9 * c ** 2))
    lead = (a * b * c) ** (1 / 3) / a * (L + a)
    cube = shell_factor ** (1 / 3)
    q1_l3 = lead * (1 + 0.75 * math.sqrt(b * b + c * c) * S * cube)
    q3_l3 = lead * (1 + 0.75 * math.sqrt(a * a + b * b) * S * cube)
    pre = 3 * math.sqrt(b * c * (L - a)) * math.sqrt(shell_factor)
    ratio = 0.75 * (L + a) / (L - a)
    q1_h1 = pre * (S + 1 / a + 1 / (2 * b) + 1 / (2 * c) + ratio * ((b + c) / a * Xa + Xb + Xc))
    q3_h1 = pre * (S + 1 / c + 1 / (2 * a) + 1 / (2 * b) + ratio * ((a + b) / c * Xc + Xa + Xb))
    return QNormBounds(q1_l3, q3_l3, q1_h1, q3_h1)


def q_norm_bounds(geom: ChannelGeometry) -> QNormBounds:
    """Closed-form ``L^3`` and gradient-``L^2`` bounds for ``q1, q3`` (eps = (L-a)/(2a)).

    These are the formulas exactly as published; see :data:`SHELL_WARNING`.
    """
    validate(geom)
    return _q_bounds(geom, 1.0)


def q_norm_bounds_shell_corrected(geom: ChannelGeometry) -> QNormBounds:
    """Same estimates with the true transition-shell volume ``8abc((1+eps)^3 - 1)``."""
    validate(geom)
    eps = default_eps(geom)
    return _q_bounds(geom, ((1 + eps) ** 3 - 1) / eps ** 3)


def drag_lift_bound_general(
    eta: float, j6_lb: float, grad_u_bound: float, q_l3: float, q_h1: float
) -> float:
    return (2.0 * eta * q_h1 + grad_u_bound * q_l3 / math.sqrt(j6_lb)) * grad_u_bound


def _require_cube_conda(geom: ChannelGeometry) -> None:
    validate(geom)
    if not geom.is_cubic_box:
        raise ForceError("psi requires cubic bounding box (a = b = c)")
    if not conda_check(geom):
        raise ForceError(
            "psi requires |K| > (8/81)(81 - 16 pi) L^3 (cube-root branch); "
            "use drag_lift_bound_general with q_norm_bounds instead"
        )


def psi_bound(geom: ChannelGeometry, eta: float, grad_u_bound: float) -> float:
    """Common drag and lift bound for a cubic box (``a = b = c``)."""
    _require_cube_conda(geom)
    L, a = geom.L, geom.a
    lin = 6 * eta * math.sqrt(L - a) * (2 + math.sqrt(3) + math.sqrt(82) * (L + a) / (L - a))
    den = math.sqrt(
        math.pi ** 2 - 2 / L ** 2 * (3 / (2 * math.pi) * geom.fluid_volume) ** (2 / 3)
    )
    quad = (1 + 0.75 * math.sqrt(6)) * 2 * math.pi ** (1 / 3) * (L + a) / den
    return lin * grad_u_bound + quad * grad_u_bound ** 2


def _cube_root_terms(geom: ChannelGeometry, eta: float):
    V = geom.fluid_volume
    j6_root = math.sqrt(math.pi ** 2 - 2 / geom.L ** 2 * (3 / (2 * math.pi) * V) ** (2 / 3))
    s3_term = (7 ** (7 / 3) / 3) ** 0.25 * (0.75 * V) ** (1 / 6) / (math.sqrt(5) * math.pi)
    return j6_root, s3_term


def finale_amplitude_limit(geom: ChannelGeometry, eta: float) -> float:
    """Admissible cosine amplitude as printed with the drag/lift corollary."""
    _require_cube_conda(geom)
    L, a = geom.L, geom.a
    M = bogovskii_M(geom)
    j6_root, s3_term = _cube_root_terms(geom, eta)
    return (
        eta ** 2 / (4 * math.sqrt(2) * math.pi ** (1 / 3))
        * math.sqrt(L) * (L - a) / (math.sqrt(2) * (1 + M) * L + (L - a) * math.pi)
        * j6_root / (eta + s3_term) ** 2
    )


def finale_gradient_bound(geom: ChannelGeometry, eta: float, amplitude: float) -> float:
    """Gradient bound for the cosine inflow as printed with the corollary."""
    _require_cube_conda(geom)
    L, a = geom.L, geom.a
    M = bogovskii_M(geom)
    _, s3_term = _cube_root_terms(geom, eta)
    return (
        math.sqrt(2 * L) * amplitude
        * ((1 + M) / (L - a) + math.pi / (math.sqrt(2) * L))
        * (math.sqrt(2) + s3_term / eta)
    )


@dataclass(frozen=True)
class ForceBounds:
    q_bounds: QNormBounds
    q_bounds_corrected: QNormBounds
    grad_u_bound: float
    drag_bound: float
    lift_bound: float
    psi: float | None
    drag_bound_corrected: float
    lift_bound_corrected: float


@dataclass(frozen=True)
class ForceReport:
    bounds: ForceBounds
    certificate: Certificate
    grad_bound_kind: str
    amplitude_limit: float
    amplitude_limit_corollary: float | None
    grad_bound_corollary: float | None
    warnings: tuple[str, ...]


def force_bounds(
    geom: ChannelGeometry, eta: float, j6_lb: float, grad_u_bound: float
) -> ForceBounds:
    """Drag/lift bounds for a given gradient bound; ``psi`` only for a cubic box under conda."""
    qb = q_norm_bounds(geom)
    qc = q_norm_bounds_shell_corrected(geom)
    drag = drag_lift_bound_general(eta, j6_lb, grad_u_bound, qb.q1_l3, qb.q1_h1)
    lift = drag_lift_bound_general(eta, j6_lb, grad_u_bound, qb.q3_l3, qb.q3_h1)
    psi = None
    if geom.is_cubic_box and conda_check(geom):
        psi = psi_bound(geom, eta, grad_u_bound)
        drag = lift = psi
    return ForceBounds(
        q_bounds=qb,
        q_bounds_corrected=qc,
        grad_u_bound=grad_u_bound,
        drag_bound=drag,
        lift_bound=lift,
        psi=psi,
        drag_bound_corrected=drag_lift_bound_general(eta, j6_lb, grad_u_bound, qc.q1_l3, qc.q1_h1),
        lift_bound_corrected=drag_lift_bound_general(eta, j6_lb, grad_u_bound, qc.q3_l3, qc.q3_h1),
    )


def force_certificate(
    geom: ChannelGeometry,
    fluid: FluidParams,
    amplitude: float,
    grad_bound: str = "rough",
    allow_uncertified: bool = False,
) -> ForceReport:
    """Full drag/lift pipeline for the cosine inflow and a cubic obstacle box.

    Raises
    ------
    ForceError
        If the box is not cubic or the obstacle-volume condition fails.
    NotCertifiedError
        If the amplitude exceeds the well-posedness threshold and
        ``allow_uncertified`` is false.
    """
    _require_cube_conda(geom)
    if grad_bound not in ("rough", "sharp"):
        raise ValueError("grad_bound must be 'rough' or 'sharp'")
    cert = certify(geom, fluid, AnalyticInflow(amplitude))
    if not cert.certified and not allow_uncertified:
        raise NotCertifiedError(cert)
    g = cert.grad_bound_rough if grad_bound == "rough" else cert.grad_bound_sharp
    if g is None:
        g = math.nan
    fb = force_bounds(geom, fluid.eta, cert.embedding_bounds.j6_lb, g)
    unit_phi = phi_of_h(inflow_norms(AnalyticInflow(1.0), geom), cert.M, geom)
    return ForceReport(
        bounds=fb,
        certificate=cert,
        grad_bound_kind=grad_bound,
        amplitude_limit=cert.threshold / unit_phi,
        amplitude_limit_corollary=finale_amplitude_limit(geom, fluid.eta),
        grad_bound_corollary=finale_gradient_bound(geom, fluid.eta, amplitude),
        warnings=cert.warnings + (SHELL_WARNING,),
    )

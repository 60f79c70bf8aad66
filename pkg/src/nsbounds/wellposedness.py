"""Existence/uniqueness threshold, contraction factor and gradient bounds.

All inputs named ``*_lb`` are lower bounds on the embedding constants; every
formula here is monotone in the direction that keeps the certificate
conservative when lower bounds replace the true constants.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from . import sobolev
from .geometry import ChannelGeometry, bogovskii_M, min_branch, validate
from .inflow import (
    PHI_DISCREPANCY_WARNING,
    AnalyticInflow,
    InflowDatum,
    InflowNorms,
    inflow_norms,
    phi_corollary_display,
    phi_of_h,
)
from .sobolev import EmbeddingBounds, embedding_bounds

__all__ = [
    "FluidParams",
    "Status",
    "Certificate",
    "SharpBoundError",
    "threshold_general",
    "threshold_explicit",
    "contraction_beta",
    "gradient_bound_sharp",
    "gradient_bound_sharp_expanded",
    "gradient_bound_rough",
    "gradient_bound_rough_explicit",
    "stokes_gradient_bound",
    "certify",
    "UNIQUENESS_NOTE",
    "UNCERTIFIED_NOTE",
]

UNIQUENESS_NOTE = (
    "existence of a weak solution, unique within the fixed-point ball "
    "B0 = {||g||_{L^3/2} <= Phi(h)}; global uniqueness is not claimed"
)
UNCERTIFIED_NOTE = (
    "uncertified: Phi(h) exceeds the threshold; beta and gradient bounds are "
    "formal values only"
)


class SharpBoundError(ArithmeticError):
    """The denominator of the sharp gradient bound is not positive."""


@dataclass(frozen=True)
class FluidParams:
    eta: float

    def __post_init__(self):
        if not (math.isfinite(self.eta) and self.eta > 0):
            raise ValueError(f"viscosity must be finite and > 0, got {self.eta}")


class Status(str, enum.Enum):
    CERTIFIED = "Certified"
    NOT_CERTIFIED = "NotCertified"


def threshold_general(s3_lb: float, j6_lb: float, eta: float) -> float:
    return eta ** 2 / (2.0 * math.sqrt(2.0)) * math.sqrt(j6_lb) * s3_lb / (
        1.0 + math.sqrt(s3_lb) * eta
    ) ** 2


def threshold_explicit(geom: ChannelGeometry, eta: float) -> float:
    """Threshold written directly in terms of the geometry."""
    m = min_branch(geom).m
    num = math.sqrt(math.pi ** 2 - 2.0 / geom.L ** 2 * m ** 2)
    den = (eta + sobolev.L3_PREFACTOR * math.sqrt(m)) ** 2
    return eta ** 2 / (4.0 * math.sqrt(2.0) * math.pi ** (1.0 / 3.0)) * num / den


def contraction_beta(phi: float, s3_lb: float, s6_lb: float, j6_lb: float, eta: float) -> float:
    r3 = math.sqrt(s3_lb) * eta
    return (
        math.sqrt(2.0) / r3
        * (1.0 / math.sqrt(j6_lb) + 1.0 / math.sqrt(s6_lb))
        * (1.0 + 1.0 / r3)
        * phi
    )


def gradient_bound_sharp(phi: float, s3_lb: float, s6_lb: float, j6_lb: float, eta: float) -> float:
    """Bound on ``||grad u||`` of the Navier-Stokes solution, with the fixed-point series summed."""
    if phi == 0:
        return 0.0
    rs3, rs6, rj6 = math.sqrt(s3_lb), math.sqrt(s6_lb), math.sqrt(j6_lb)
    k = math.sqrt(2.0) * (rs6 + rj6) * (1.0 + rs3 * eta)
    den = rj6 * rs6 * s3_lb * eta ** 2 - k * phi
    if not den > 0:
        raise SharpBoundError("sharp bound inapplicable: denominator <= 0")
    frac = k * phi ** 2 / den
    return math.sqrt(2.0) * (1.0 + 2.0 / (rj6 * rs3 * eta) * frac) * phi


def gradient_bound_sharp_expanded(
    phi: float, s3_lb: float, s6_lb: float, j6_lb: float, eta: float
) -> float:
    """Same bound written through ``beta / (1 - beta)`` (fixed-point series form)."""
    beta = contraction_beta(phi, s3_lb, s6_lb, j6_lb, eta)
    if not beta < 1:
        raise SharpBoundError("sharp bound inapplicable: beta >= 1")
    return math.sqrt(2.0) * (
        1.0 + 2.0 / (math.sqrt(j6_lb * s3_lb) * eta) * beta / (1.0 - beta) * phi
    ) * phi


def gradient_bound_rough(phi: float, s3_lb: float, eta: float) -> float:
    return (math.sqrt(2.0) + 1.0 / (math.sqrt(s3_lb) * eta)) * phi


def gradient_bound_rough_explicit(phi: float, geom: ChannelGeometry, eta: float) -> float:
    m = min_branch(geom).m
    return (math.sqrt(2.0) + sobolev.L3_PREFACTOR * math.sqrt(m) / eta) * phi


def stokes_gradient_bound(phi: float, g_norm_3_2: float, s3_lb: float, eta: float) -> float:
    """Bound on ``||grad u||`` for the Stokes problem with forcing of L^{3/2} norm ``g``."""
    if g_norm_3_2 < 0:
        raise ValueError("forcing norm must be >= 0")
    return math.sqrt(2.0) * (phi + g_norm_3_2 / (math.sqrt(s3_lb) * eta))


@dataclass(frozen=True)
class Certificate:
    """Outcome of the well-posedness check for one set of inputs."""

    geometry: ChannelGeometry
    fluid: FluidParams
    inflow: InflowDatum
    embedding_bounds: EmbeddingBounds
    M: float
    norms: InflowNorms
    phi: float
    threshold: float
    margin: float
    beta: float
    grad_bound_rough: float
    grad_bound_sharp: float | None
    status: Status
    phi_corollary_display: float | None = None
    notes: tuple[str, ...] = ()
    warnings: tuple[str, ...] = field(default=())

    @property
    def certified(self) -> bool:
        return self.status is Status.CERTIFIED


def certify(geom: ChannelGeometry, fluid: FluidParams, datum: InflowDatum) -> Certificate:
    """Evaluate every constant and decide whether the threshold holds."""
    validate(geom)
    eta = fluid.eta
    eb = embedding_bounds(geom)
    M = bogovskii_M(geom)
    norms = inflow_norms(datum, geom)
    phi = phi_of_h(norms, M, geom)
    thr = threshold_explicit(geom, eta)
    status = Status.CERTIFIED if phi <= thr else Status.NOT_CERTIFIED
    beta = contraction_beta(phi, eb.s3_lb, eb.s6_lb, eb.j6_lb, eta)
    rough = gradient_bound_rough(phi, eb.s3_lb, eta)
    warnings = []
    notes = [UNIQUENESS_NOTE] if status is Status.CERTIFIED else [UNCERTIFIED_NOTE]
    try:
        sharp = gradient_bound_sharp(phi, eb.s3_lb, eb.s6_lb, eb.j6_lb, eta)
    except SharpBoundError:
        if status is Status.CERTIFIED:
            raise
        sharp = None
        warnings.append("sharp-bound-undefined: denominator <= 0 beyond the threshold")
    display = None
    if isinstance(datum, AnalyticInflow):
        display = phi_corollary_display(datum.amplitude, M, geom)
        warnings.append(PHI_DISCREPANCY_WARNING)
    return Certificate(
        geometry=geom,
        fluid=fluid,
        inflow=datum,
        embedding_bounds=eb,
        M=M,
        norms=norms,
        phi=phi,
        threshold=thr,
        margin=thr - phi,
        beta=beta,
        grad_bound_rough=rough,
        grad_bound_sharp=sharp,
        status=status,
        phi_corollary_display=display,
        notes=tuple(notes),
        warnings=tuple(warnings),
    )

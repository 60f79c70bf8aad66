"""Explicit bounds for the Sobolev embedding constants of the channel.

``S_p`` refers to fields vanishing on the inlet and the walls, ``J_p`` to
fields vanishing on the walls only. Every function here returns a coefficient
``k`` with ``||u||_p <= k ||grad u||_2``; the matching constant bound is
``1 / k**2`` and is a *lower* bound on the true constant.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .geometry import ChannelGeometry, min_branch

__all__ = [
    "P_MIN",
    "EmbeddingBounds",
    "poincare_coeff_vstar",
    "l6_coeff_vstar",
    "poincare_coeff_v",
    "l6_coeff_v",
    "gn_constant",
    "lp_coeff_vstar",
    "l3_coeff_vstar",
    "L3_PREFACTOR",
    "embedding_bounds",
]

#: Smallest exponent accepted by :func:`gn_constant`; Gamma arguments blow up at 2.
P_MIN = 2.0 + 1e-6

#: Prefactor of ``m**(1/2)`` in the L^3 bound.
L3_PREFACTOR = (
    (1.0 / math.sqrt(5.0))
    * (7.0 ** (7.0 / 3.0) / 3.0) ** 0.25
    * (1.0 / (2.0 * math.pi ** 5)) ** (1.0 / 6.0)
)


def poincare_coeff_vstar(geom: ChannelGeometry) -> float:
    return min_branch(geom).m / math.pi


def l6_coeff_vstar() -> float:
    return 2.0 / (math.sqrt(3.0) * math.pi ** (2.0 / 3.0))


def _v_denominator(geom: ChannelGeometry) -> float:
    m = min_branch(geom).m
    # pi^2 max{..}^2 - 2/L^2 with max{..} = 1/m
    den = (math.pi / m) ** 2 - 2.0 / geom.L ** 2
    if not den > 0:
        raise RuntimeError("V-space denominator violated")
    return den


def poincare_coeff_v(geom: ChannelGeometry) -> float:
    return math.sqrt(3.0) / math.sqrt(_v_denominator(geom))


def l6_coeff_v(geom: ChannelGeometry) -> float:
    inv_m = 1.0 / min_branch(geom).m
    return 2.0 * math.pi ** (1.0 / 3.0) * inv_m / math.sqrt(_v_denominator(geom))


def gn_constant(p: float) -> float:
    """Optimal Gagliardo-Nirenberg constant ``C(p)`` of del Pino and Dolbeault.

    Parameters
    ----------
    p : float
        Exponent in ``[2 + 1e-6, 6]``.

    Raises
    ------
    ValueError
        If ``p`` lies outside the supported range.
    """
    if not (P_MIN <= p <= 6.0):
        raise ValueError(f"gn_constant: p={p!r} outside (2, 6]")
    t1 = ((p * p - 4.0) / (24.0 * math.pi)) ** (3.0 * (p - 2.0) / (4.0 * p))
    log_ratio = math.lgamma((p + 2.0) / (p - 2.0)) - math.lgamma(
        (10.0 - p) / (2.0 * (p - 2.0))
    )
    t2 = math.exp((p - 2.0) / (2.0 * p) * log_ratio)
    t3 = ((10.0 - p) / (2.0 * (p + 2.0))) ** ((10.0 - p) / (4.0 * p))
    return t1 * t2 * t3


def lp_coeff_vstar(geom: ChannelGeometry, p: float) -> float:
    """L^p coefficient on V*, from Gagliardo-Nirenberg plus the Poincare bound."""
    c = gn_constant(p)
    expo = (4.0 * p - p * p + 12.0) / (2.0 * p * (p + 2.0))
    return 2.0 ** ((p - 2.0) / (2.0 * p)) * c * poincare_coeff_vstar(geom) ** expo


def l3_coeff_vstar(geom: ChannelGeometry) -> float:
    return L3_PREFACTOR * math.sqrt(min_branch(geom).m)


@dataclass(frozen=True)
class EmbeddingBounds:
    """Lower bounds on ``S_2, S_3, S_6, J_2, J_6`` and the ``m`` they used."""

    s2_lb: float
    s3_lb: float
    s6_lb: float
    j2_lb: float
    j6_lb: float
    m: float
    branch: str


def embedding_bounds(geom: ChannelGeometry) -> EmbeddingBounds:
    mb = min_branch(geom)
    return EmbeddingBounds(
        s2_lb=1.0 / poincare_coeff_vstar(geom) ** 2,
        s3_lb=1.0 / l3_coeff_vstar(geom) ** 2,
        s6_lb=1.0 / l6_coeff_vstar() ** 2,
        j2_lb=1.0 / poincare_coeff_v(geom) ** 2,
        j6_lb=1.0 / l6_coeff_v(geom) ** 2,
        m=mb.m,
        branch=mb.branch.value,
    )

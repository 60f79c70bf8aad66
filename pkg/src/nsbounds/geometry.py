"""Channel and obstacle geometry.

The channel is the cube ``Q = (-L, L)^3`` and the obstacle ``K`` enters every
estimate only through its volume and an enclosing box
``P = (-a, a) x (-b, b) x (-c, c)``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

__all__ = [
    "ChannelGeometry",
    "GeometryError",
    "BogovskiiConstants",
    "Branch",
    "MinBranch",
    "BREAK_EVEN_RATIO",
    "CONDA_COEFF",
    "check",
    "validate",
    "sigma_gamma",
    "bogovskii_M",
    "bogovskii_constants",
    "min_branch",
    "conda_check",
]

# Decimal coefficients of the Bogovskii extension constant M.
M_C0 = 327.23
M_C1 = 445.17
M_C2 = 153.85
M_C3 = 22.4
M_C4 = 15.79

#: |Q| / (|Q| - |K|) at which the two arguments of the Poincare min coincide.
BREAK_EVEN_RATIO = 81.0 / (16.0 * math.pi)

#: |K| > CONDA_COEFF * L^3 forces the cube-root branch.
CONDA_COEFF = 8.0 / 81.0 * (81.0 - 16.0 * math.pi)


class GeometryError(ValueError):
    """Raised when a geometry violates the ordering or volume hypotheses."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


@dataclass(frozen=True)
class ChannelGeometry:
    """Cube half-width ``L``, box half-extents ``a >= b >= c`` and ``|K|``."""

    L: float
    a: float
    b: float
    c: float
    vol_K: float

    @property
    def vol_Q(self) -> float:
        return 8.0 * self.L ** 3

    @property
    def vol_P(self) -> float:
        return 8.0 * self.a * self.b * self.c

    @property
    def fluid_volume(self) -> float:
        """``|Q| - |K|``."""
        return self.vol_Q - self.vol_K

    @property
    def is_cubic_box(self) -> bool:
        return self.a == self.b == self.c


def check(geom: ChannelGeometry) -> list[str]:
    """Return the list of violated hypotheses (empty when valid)."""
    L, a, b, c, vol = geom.L, geom.a, geom.b, geom.c, geom.vol_K
    out = []
    values = {"L": L, "a": a, "b": b, "c": c, "vol_K": vol}
    bad = [k for k, v in values.items() if not math.isfinite(v)]
    if bad:
        return [f"{k} must be finite" for k in bad]
    if not a < L:
        out.append("a < L violated")
    if not b <= a:
        out.append("b <= a violated")
    if not c <= b:
        out.append("c <= b violated")
    if not c > 0:
        out.append("c > 0 violated")
    if not vol > 0:
        out.append("vol_K > 0 violated")
    if not vol <= 8.0 * a * b * c:
        out.append("vol_K <= 8abc violated")
    return out


def validate(geom: ChannelGeometry) -> ChannelGeometry:
    """Return ``geom`` unchanged, or raise :class:`GeometryError`."""
    violations = check(geom)
    if violations:
        raise GeometryError(violations)
    return geom


def sigma_gamma(geom: ChannelGeometry) -> tuple[float, float]:
    """Volume-like scalars ``(sigma, gamma)`` entering the constant ``M``."""
    L, a, b, c = geom.L, geom.a, geom.b, geom.c
    s1 = a + b + c
    s2 = a * b + a * c + b * c
    s3 = a * b * c
    sigma = 7 * L ** 3 - s1 * L ** 2 - s2 * L - s3
    gamma = 6 * L ** 3 - 2 * s1 * L ** 2 - 2 * s2 * L + 6 * s3
    return sigma, gamma


def bogovskii_M(geom: ChannelGeometry) -> float:
    """Constant of the explicit solenoidal extension of the inlet datum."""
    L, a, b, c = geom.L, geom.a, geom.b, geom.c
    sigma, gamma = sigma_gamma(geom)
    d = L - a
    rs = math.sqrt(sigma)
    d32 = d ** 1.5
    prefactor = math.sqrt(12.0 * (1.0 + 16.0 / gamma * (L ** 3 - a * b * c)))
    bracket = (
        M_C0
        + M_C1 * rs / d32
        + M_C2 * sigma / d ** 3
        + 144.0 * L ** 2 / d ** 2 * (M_C3 + M_C4 * rs / d32) ** 2
    )
    return prefactor * math.sqrt(bracket)


@dataclass(frozen=True)
class BogovskiiConstants:
    sigma: float
    gamma: float
    M: float


def bogovskii_constants(geom: ChannelGeometry) -> BogovskiiConstants:
    sigma, gamma = sigma_gamma(geom)
    return BogovskiiConstants(sigma=sigma, gamma=gamma, M=bogovskii_M(geom))


class Branch(str, enum.Enum):
    CUBE_ROOT = "cube_root"
    BOX = "box"


@dataclass(frozen=True)
class MinBranch:
    m: float
    branch: Branch


def min_branch(geom: ChannelGeometry) -> MinBranch:
    """``m = min{ (3(|Q|-|K|)/(2 pi))^(1/3), 4L/3 }`` and which argument won.

    Ties go to the cube-root branch; ``m`` is the same either way.
    """
    cube_root = (3.0 * geom.fluid_volume / (2.0 * math.pi)) ** (1.0 / 3.0)
    box = 4.0 * geom.L / 3.0
    if cube_root <= box:
        return MinBranch(cube_root, Branch.CUBE_ROOT)
    return MinBranch(box, Branch.BOX)


def conda_check(geom: ChannelGeometry) -> bool:
    """Obstacle-volume condition under which the cube-root branch is active."""
    return geom.vol_K > CONDA_COEFF * geom.L ** 3

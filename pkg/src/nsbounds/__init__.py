"""Certified a priori bounds for steady Navier-Stokes flow past an obstacle in a channel."""
from .forces import ForceReport, force_certificate
from .geometry import ChannelGeometry, GeometryError, bogovskii_M, conda_check, min_branch
from .inflow import AnalyticInflow, SampledInflow, inflow_norms, phi_of_h
from .sobolev import EmbeddingBounds, embedding_bounds
from .wellposedness import Certificate, FluidParams, Status, certify

__version__ = "0.1.0"

__all__ = [
    "AnalyticInflow",
    "Certificate",
    "ChannelGeometry",
    "EmbeddingBounds",
    "FluidParams",
    "ForceReport",
    "GeometryError",
    "SampledInflow",
    "Status",
    "bogovskii_M",
    "certify",
    "conda_check",
    "embedding_bounds",
    "force_certificate",
    "inflow_norms",
    "min_branch",
    "phi_of_h",
]

"""JSON encoding of certificates and force reports.

Every number is written as a decimal string with 17 significant digits, which
round-trips IEEE doubles exactly.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict
from pathlib import Path

from .forces import ForceReport, QNormBounds
from .geometry import ChannelGeometry
from .inflow import AnalyticInflow, InflowDatum, SampledInflow
from .wellposedness import Certificate, FluidParams

__all__ = [
    "num",
    "parse_num",
    "geometry_to_dict",
    "geometry_from_dict",
    "inflow_to_dict",
    "inflow_from_dict",
    "certificate_to_dict",
    "inputs_from_certificate_dict",
    "force_report_to_dict",
    "dumps",
    "write_or_print",
]


def num(x: float | None) -> str | None:
    if x is None:
        return None
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, ".17g")


def parse_num(s) -> float:
    return float(s)


def geometry_to_dict(g: ChannelGeometry) -> dict:
    return {
        "channel.L": num(g.L),
        "box.a": num(g.a),
        "box.b": num(g.b),
        "box.c": num(g.c),
        "obstacle.volume": num(g.vol_K),
    }


def geometry_from_dict(d: dict) -> ChannelGeometry:
    return ChannelGeometry(
        L=parse_num(d["channel.L"]),
        a=parse_num(d["box.a"]),
        b=parse_num(d["box.b"]),
        c=parse_num(d["box.c"]),
        vol_K=parse_num(d["obstacle.volume"]),
    )


def inflow_to_dict(datum: InflowDatum) -> dict:
    if isinstance(datum, AnalyticInflow):
        return {"type": "analytic", "amplitude": num(datum.amplitude)}
    return {
        "type": "sampled",
        "grid_file": datum.source,
        "compat_tol": num(datum.compat_tol),
        "n_y": datum.n_y,
        "n_z": datum.n_z,
    }


def inflow_from_dict(d: dict, L: float) -> InflowDatum:
    if d["type"] == "analytic":
        return AnalyticInflow(parse_num(d["amplitude"]))
    if not d.get("grid_file"):
        raise ValueError("sampled inflow without grid_file cannot be re-read")
    return SampledInflow.from_csv(d["grid_file"], L, parse_num(d["compat_tol"]))


def _qb(q: QNormBounds) -> dict:
    return {k: num(v) for k, v in asdict(q).items()}


def certificate_to_dict(cert: Certificate, stokes_forcing: float | None = None) -> dict:
    eb = cert.embedding_bounds
    out = {
        "geometry": geometry_to_dict(cert.geometry),
        "fluid": {"viscosity": num(cert.fluid.eta)},
        "inflow": inflow_to_dict(cert.inflow),
        "inflow_norms": {
            "l2": num(cert.norms.l2),
            "grad_l2": num(cert.norms.grad_l2),
            "div_l2": num(cert.norms.div_l2),
        },
        "embedding_bounds": {
            "kind": "lower_bound",
            "S2": num(eb.s2_lb),
            "S3": num(eb.s3_lb),
            "S6": num(eb.s6_lb),
            "J2": num(eb.j2_lb),
            "J6": num(eb.j6_lb),
            "m": num(eb.m),
            "branch": eb.branch,
        },
        "M": num(cert.M),
        "phi": num(cert.phi),
        "phi_corollary_display": num(cert.phi_corollary_display),
        "threshold": num(cert.threshold),
        "margin": num(cert.margin),
        "beta": num(cert.beta),
        "grad_bound_rough": num(cert.grad_bound_rough),
        "grad_bound_sharp": num(cert.grad_bound_sharp),
        "status": cert.status.value,
        "notes": list(cert.notes),
        "warnings": list(cert.warnings),
    }
    if stokes_forcing is not None:
        from .wellposedness import stokes_gradient_bound

        out["stokes"] = {
            "forcing_norm": num(stokes_forcing),
            "grad_bound": num(
                stokes_gradient_bound(cert.phi, stokes_forcing, eb.s3_lb, cert.fluid.eta)
            ),
        }
    return out


def inputs_from_certificate_dict(d: dict):
    """Recover ``(geometry, fluid, datum, stokes_forcing)`` from a certificate dict."""
    geom = geometry_from_dict(d["geometry"])
    fluid = FluidParams(parse_num(d["fluid"]["viscosity"]))
    datum = inflow_from_dict(d["inflow"], geom.L)
    forcing = parse_num(d["stokes"]["forcing_norm"]) if "stokes" in d else None
    return geom, fluid, datum, forcing


def force_report_to_dict(rep: ForceReport) -> dict:
    fb = rep.bounds
    return {
        "geometry": geometry_to_dict(rep.certificate.geometry),
        "fluid": {"viscosity": num(rep.certificate.fluid.eta)},
        "inflow": inflow_to_dict(rep.certificate.inflow),
        "status": rep.certificate.status.value,
        "phi": num(rep.certificate.phi),
        "threshold": num(rep.certificate.threshold),
        "amplitude_limit": num(rep.amplitude_limit),
        "amplitude_limit_corollary_display": num(rep.amplitude_limit_corollary),
        "grad_bound_kind": rep.grad_bound_kind,
        "grad_u_bound": num(fb.grad_u_bound),
        "grad_bound_corollary_display": num(rep.grad_bound_corollary),
        "q_bounds": _qb(fb.q_bounds),
        "q_bounds_corrected": _qb(fb.q_bounds_corrected),
        "drag_bound": num(fb.drag_bound),
        "lift_bound": num(fb.lift_bound),
        "psi": num(fb.psi),
        "drag_bound_corrected": num(fb.drag_bound_corrected),
        "lift_bound_corrected": num(fb.lift_bound_corrected),
        "warnings": list(rep.warnings),
    }


def dumps(obj: dict) -> str:
    return json.dumps(obj, indent=2) + "\n"


def write_or_print(text: str, out: str | Path | None) -> None:
    if out is None:
        print(text, end="")
    else:
        Path(out).write_text(text)

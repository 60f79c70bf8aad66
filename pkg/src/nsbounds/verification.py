"""Oracle suite behind ``nsbounds verify``.

Each check compares an analytic constant with an independent brute-force
value and yields a :class:`CheckResult`. Status ``WARN`` marks a published
estimate that is known not to hold as stated; such rows are reported but do
not fail the suite.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Callable, Iterator

import numpy as np

from . import sobolev
from .forces import (
    ExtensionField,
    phi_eps_eval,
    q_norm_bounds,
    q_norm_bounds_shell_corrected,
)
from .geometry import BREAK_EVEN_RATIO, Branch, ChannelGeometry, check, min_branch
from .inflow import AnalyticInflow, SampledInflow, inflow_norms
from .oracle import (
    BoxDomain,
    OracleError,
    analytic_box_eigenvalue,
    box_eigenvalue_fd,
    divergence_residual_fd,
    field_norms,
    observed_order,
    piecewise_simpson_axis,
    simpson_nd,
)
from .wellposedness import contraction_beta, threshold_explicit, threshold_general

__all__ = ["CheckResult", "random_geometries", "run_suite", "format_table", "q_norm_quadrature"]

PASS, FAIL, WARN = "PASS", "FAIL", "WARN"


@dataclass(frozen=True)
class CheckResult:
    name: str
    observed: str
    expected: str
    status: str
    seconds: float = 0.0


def random_geometries(rng: np.random.Generator, count: int, L: float | None = None):
    """Valid geometries with ``a >= b >= c`` and ``|K|`` uniform in ``(0, 8abc]``."""
    out = []
    while len(out) < count:
        ell = float(rng.uniform(0.5, 3.0)) if L is None else L
        a, b, c = sorted(rng.uniform(0.02, 0.98, size=3) * ell, reverse=True)
        vol = float(rng.uniform(1e-3, 1.0)) * 8 * a * b * c
        g = ChannelGeometry(ell, float(a), float(b), float(c), vol)
        if not check(g):
            out.append(g)
    return out


def q_norm_quadrature(field: ExtensionField, counts=(33, 65, 33)) -> tuple[float, float]:
    """Simpson values of ``||q||_{L^3}`` and ``||grad q||_{L^2}`` with nodes on the kinks."""
    axes = []
    for s in field.scales:
        e = field.eps
        axes.append(piecewise_simpson_axis([-(1 + e) * s, -s, s, (1 + e) * s], counts))
    return field_norms(field.evaluate, axes)


def _rel(x: float, ref: float) -> float:
    return abs(x - ref) / abs(ref)


def check_gn_endpoint() -> CheckResult:
    lhs = 2 ** (1 / 3) * sobolev.gn_constant(6.0)
    rhs = sobolev.l6_coeff_vstar()
    err = abs(lhs - rhs)
    return CheckResult("GN endpoint 2^(1/3) C(6)", f"|diff|={err:.2e}", "<= 1e-12", PASS if err <= 1e-12 else FAIL)


def check_break_even() -> CheckResult:
    L = 1.0
    vol_q = 8.0
    vol_k = vol_q * (1 - 1 / BREAK_EVEN_RATIO)
    cube = (3 * (vol_q - vol_k) / (2 * math.pi)) ** (1 / 3)
    diff = abs(cube - 4 * L / 3)
    branches = []
    for r in np.linspace(0.98, 1.02, 1001) * BREAK_EVEN_RATIO:
        g = ChannelGeometry(L, 0.999, 0.999, 0.999, vol_q * (1 - 1 / r))
        branches.append(min_branch(g).branch)
    flips = sum(1 for u, v in zip(branches, branches[1:]) if u != v)
    ok = diff <= 1e-10 and flips == 1 and branches[0] is Branch.BOX
    return CheckResult("min-branch break-even", f"|diff|={diff:.1e}, flips={flips}", "<= 1e-10, 1 flip", PASS if ok else FAIL)


def check_poincare_ceilings(geoms) -> list[CheckResult]:
    rv = max(sobolev.poincare_coeff_vstar(g) / g.L for g in geoms)
    rw = max(sobolev.poincare_coeff_v(g) / g.L for g in geoms)
    return [
        CheckResult("Poincare coeff on V*", f"max/L={rv:.4f}", "<= 0.43", PASS if rv <= 0.43 else FAIL),
        # The published 0.46L is not attained on the box branch; kept visible as WARN.
        CheckResult("Poincare coeff on V", f"max/L={rw:.4f}", "<= 0.46 (published)", PASS if rw <= 0.46 else WARN),
    ]


def check_threshold_identity(geoms, rng) -> CheckResult:
    worst = 0.0
    for g in geoms:
        eta = float(10 ** rng.uniform(-2, 2))
        eb = sobolev.embedding_bounds(g)
        worst = max(worst, _rel(threshold_explicit(g, eta), threshold_general(eb.s3_lb, eb.j6_lb, eta)))
    return CheckResult("threshold explicit == general", f"max rel={worst:.1e}", "<= 1e-12", PASS if worst <= 1e-12 else FAIL)


def check_beta(geoms, rng) -> CheckResult:
    worst = 0.0
    for g in geoms:
        eta = float(10 ** rng.uniform(-2, 2))
        eb = sobolev.embedding_bounds(g)
        phi = float(rng.uniform(0, 1)) * threshold_general(eb.s3_lb, eb.j6_lb, eta)
        worst = max(worst, contraction_beta(phi, eb.s3_lb, eb.s6_lb, eb.j6_lb, eta))
    return CheckResult("beta < 1 when certified", f"max beta={worst:.4f}", "< 1", PASS if worst < 1 else FAIL)


def check_eigen(n: int) -> list[CheckResult]:
    qplus = BoxDomain((-1.0, -1.0, -1.0), (3.0, 1.0, 1.0))
    exact = 9 * math.pi ** 2 / 16
    assert abs(analytic_box_eigenvalue(qplus) - exact) < 1e-12
    coarse = box_eigenvalue_fd(qplus, n // 2)
    fine = box_eigenvalue_fd(qplus, n)
    e_c, e_f = _rel(coarse.value, exact), _rel(fine.value, exact)
    order = observed_order(e_c, e_f, 1.0 / (n // 2 + 1), 1.0 / (n + 1))
    cube = box_eigenvalue_fd(BoxDomain.cube(0.0, math.pi), n)
    e_cube = _rel(cube.value, 3.0)
    return [
        CheckResult(f"lambda1(Q+) n={n}", f"{fine.value:.6f} (rel {e_f:.1e})", f"{exact:.6f} within 1%", PASS if e_f <= 0.01 else FAIL),
        CheckResult(f"lambda1 order n={n // 2}->{n}", f"{order:.3f}", ">= 1.8", PASS if order >= 1.8 else FAIL),
        CheckResult(f"lambda1((0,pi)^3) n={n}", f"{cube.value:.6f} (rel {e_cube:.1e})", "3 within 1%", PASS if e_cube <= 0.01 else FAIL),
    ]


def cutoff_sups(eps: float, spacing: float = 1e-6) -> tuple[float, float]:
    """Sampled ``sup|phi'|`` and ``sup|phi''|`` on a grid containing the breakpoints."""
    n = int(round(eps / spacing)) + 1
    t = np.concatenate([np.linspace(1.0, 1.0 + eps, n), np.linspace(-1.0 - eps, -1.0, n)])
    _, d1, d2 = phi_eps_eval(eps, t)
    return float(np.max(np.abs(d1))), float(np.max(np.abs(d2)))


def check_cutoff() -> CheckResult:
    worst = 0.0
    for eps in (0.1, 0.5, 1.0):
        s1, s2 = cutoff_sups(eps)
        worst = max(worst, _rel(s1, 1.5 / eps), _rel(s2, 6 / eps ** 2))
    return CheckResult("cutoff sup|phi'|, sup|phi''|", f"max rel={worst:.1e}", "<= 1e-6", PASS if worst <= 1e-6 else FAIL)


def check_q_fields(rng) -> list[CheckResult]:
    g = ChannelGeometry(2.0, 1.0, 1.0, 1.0, 1.0)
    results = []
    exact_ok = True
    orders = []
    for axis in (1, 3):
        q = ExtensionField(g, axis)
        inside = rng.uniform(-1, 1, size=(2000, 3)) * q.scales
        target = np.zeros(3)
        target[q.k] = 1.0
        exact_ok &= bool(np.all(q(inside) == target))
        far = rng.uniform(-g.L, g.L, size=(4000, 3))
        lo, hi = q.support
        outside = far[np.any((far < lo) | (far > hi), axis=1)]
        exact_ok &= bool(np.all(q(outside) == 0.0))
        pts = _shell_points(q, rng, 500, margin=4e-3)
        r = [divergence_residual_fd(q, step=s, points=pts) for s in (1e-3, 5e-4, 2.5e-4)]
        orders.append(min(observed_order(r[0], r[1], 2, 1), observed_order(r[1], r[2], 2, 1)))
    results.append(CheckResult("q = e_i on P, 0 outside", "exact" if exact_ok else "mismatch", "exact", PASS if exact_ok else FAIL))
    results.append(CheckResult("q div residual order", f"{min(orders):.3f}", ">= 1.8", PASS if min(orders) >= 1.8 else FAIL))
    for geom, label in ((g, "L=2,a=1"), (ChannelGeometry(1.0, 0.8, 0.8, 0.8, 3.1), "L=1,a=0.8")):
        qb, qc = q_norm_bounds(geom), q_norm_bounds_shell_corrected(geom)
        l3, h1 = q_norm_quadrature(ExtensionField(geom, 1))
        ok = l3 <= qb.q1_l3 and h1 <= qb.q1_h1
        results.append(CheckResult(
            f"q1 norms <= closed form ({label})",
            f"L3 {l3:.3f}/{qb.q1_l3:.3f}, H1 {h1:.2f}/{qb.q1_h1:.2f}",
            "numeric <= bound (published)",
            PASS if ok else WARN,
        ))
        ok_c = l3 <= qc.q1_l3 and h1 <= qc.q1_h1
        results.append(CheckResult(
            f"q1 norms <= shell-corrected ({label})",
            f"L3 {l3:.3f}/{qc.q1_l3:.3f}, H1 {h1:.2f}/{qc.q1_h1:.2f}",
            "numeric <= bound",
            PASS if ok_c else FAIL,
        ))
    return results


def _shell_points(q: ExtensionField, rng, count: int, margin: float) -> np.ndarray:
    """Random points in the transition shell away from the kink planes."""
    lo, hi = q.support
    pts = []
    while len(pts) < count:
        p = rng.uniform(lo, hi)
        u = np.abs(p) / q.scales
        near = np.any(np.abs(u - 1) < margin) or np.any(np.abs(u - 1 - q.eps) < margin)
        if np.any(u > 1) and not near:
            pts.append(p)
    return np.array(pts)


def check_inflow_quadrature() -> list[CheckResult]:
    A, L = 1.3, 1.0
    g = ChannelGeometry(L, 0.5, 0.5, 0.5, 0.5)
    exact = inflow_norms(AnalyticInflow(A), g)

    def profile(Y, Z):
        h = np.zeros(Y.shape + (3,))
        h[..., 0] = A * np.cos(math.pi * Y / (2 * L)) * np.cos(math.pi * Z / (2 * L))
        return h

    errs = {}
    for n in (65, 129, 257):
        s = inflow_norms(SampledInflow.from_function(profile, L, n), g)
        errs[n] = (abs(s.l2 - exact.l2), abs(s.grad_l2 - exact.grad_l2), abs(s.div_l2 - exact.div_l2))
    order = observed_order(errs[65][1], errs[129][1], 1 / 64, 1 / 128)
    worst = max(errs[257])
    return [
        CheckResult("inflow grad-norm Simpson order", f"{order:.3f}", ">= 3.5", PASS if order >= 3.5 else FAIL),
        CheckResult("inflow norms n=257", f"max err={worst:.1e}", "<= 1e-8", PASS if worst <= 1e-8 else FAIL),
    ]


def check_simpson() -> CheckResult:
    val = simpson_nd(lambda x: np.sin(x) ** 2, BoxDomain((0.0,), (math.pi,)), 257)
    err = abs(val - math.pi / 2)
    return CheckResult("Simpson int sin^2 over (0,pi)", f"err={err:.1e}", "<= 1e-10", PASS if err <= 1e-10 else FAIL)


def run_suite(eig_n: int = 64, seed: int = 0) -> Iterator[CheckResult]:
    """Run every check in order, yielding results as they finish."""
    rng = np.random.default_rng(seed)
    geoms = random_geometries(rng, 1000)
    steps: list[Callable[[], object]] = [
        check_gn_endpoint,
        check_break_even,
        lambda: check_poincare_ceilings(geoms),
        lambda: check_threshold_identity(geoms, rng),
        lambda: check_beta(geoms, rng),
        lambda: check_eigen(eig_n),
        check_cutoff,
        lambda: check_q_fields(rng),
        check_inflow_quadrature,
        check_simpson,
    ]
    for step in steps:
        t0 = time.perf_counter()
        try:
            out = step()
        except OracleError as exc:
            out = CheckResult(getattr(step, "__name__", "oracle"), str(exc), "converged", FAIL)
        dt = time.perf_counter() - t0
        for r in out if isinstance(out, list) else [out]:
            yield CheckResult(r.name, r.observed, r.expected, r.status, dt)


def format_table(rows: list[CheckResult]) -> str:
    header = ("check", "observed", "expected", "status")
    body = [(r.name, r.observed, r.expected, r.status) for r in rows]
    widths = [max(len(x[i]) for x in [header] + body) for i in range(4)]
    lines = ["  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip() for row in [header] + body]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"

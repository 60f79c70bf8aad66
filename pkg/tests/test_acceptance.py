"""Acceptance criteria 1-11.

Each test records a one-line PASS/FAIL verdict that is printed in the
terminal summary, then asserts the criterion at its stated tolerance.
"""
import math
import time

import numpy as np
import pytest

from nsbounds import sobolev
from nsbounds.forces import (
    ExtensionField,
    force_certificate,
    phi_eps_eval,
    q_norm_bounds,
    q_norm_bounds_shell_corrected,
)
from nsbounds.geometry import BREAK_EVEN_RATIO, Branch, ChannelGeometry, conda_check, min_branch
from nsbounds.inflow import PHI_DISCREPANCY_WARNING, AnalyticInflow, SampledInflow, inflow_norms
from nsbounds.oracle import (
    BoxDomain,
    box_eigenvalue_fd,
    divergence_residual_fd,
    observed_order,
)
from nsbounds.report import certificate_to_dict
from nsbounds.verification import cutoff_sups, q_norm_quadrature, random_geometries
from nsbounds.wellposedness import (
    FluidParams,
    Status,
    certify,
    contraction_beta,
    threshold_explicit,
    threshold_general,
)

from conftest import ACCEPTANCE_LINES

SEED = ChannelGeometry(1.0, 0.8, 0.8, 0.8, 3.1)


def record(n, ok, detail, t0):
    line = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}  [{time.perf_counter() - t0:.1f}s]"
    ACCEPTANCE_LINES[n] = line
    print(line)
    return ok


def test_c01_gn_endpoint_identity():
    t0 = time.perf_counter()
    diff = abs(2 ** (1 / 3) * sobolev.gn_constant(6.0) - 2 / (math.sqrt(3) * math.pi ** (2 / 3)))
    assert record(1, diff <= 1e-12, f"|2^(1/3) C(6) - 2/(sqrt3 pi^(2/3))| = {diff:.2e}", t0)


def test_c02_break_even_continuity():
    t0 = time.perf_counter()
    L = 1.0
    vol_q = 8 * L ** 3
    vol_k = vol_q * (1 - 1 / BREAK_EVEN_RATIO)
    cube = (3 * (vol_q - vol_k) / (2 * math.pi)) ** (1 / 3)
    diff = abs(cube - 4 * L / 3)
    ratios = np.linspace(0.95, 1.05, 1000) * BREAK_EVEN_RATIO
    branches = [min_branch(ChannelGeometry(L, 0.999, 0.999, 0.999, vol_q * (1 - 1 / r))).branch for r in ratios]
    flips = [i for i in range(999) if branches[i] != branches[i + 1]]
    ok = (
        diff <= 1e-10
        and len(flips) == 1
        and branches[0] is Branch.BOX
        and branches[-1] is Branch.CUBE_ROOT
        and abs(ratios[flips[0]] - BREAK_EVEN_RATIO) <= ratios[1] - ratios[0]
    )
    assert record(2, ok, f"branch gap {diff:.1e}, {len(flips)} flip(s) over 1000 ratios", t0)


def test_c03_poincare_ceilings():
    t0 = time.perf_counter()
    geoms = random_geometries(np.random.default_rng(3), 10_000)
    rv = np.array([sobolev.poincare_coeff_vstar(g) / g.L for g in geoms])
    rw = np.array([sobolev.poincare_coeff_v(g) / g.L for g in geoms])
    ok_v_star = bool(np.all(rv <= 0.43))
    ok_v = bool(np.all(rw <= 0.46))
    detail = (
        f"V*: max {rv.max():.4f} L (<= 0.43 L {'ok' if ok_v_star else 'violated'}); "
        f"V: max {rw.max():.4f} L, {int(np.sum(rw > 0.46))}/10000 above 0.46 L"
    )
    assert record(3, ok_v_star and ok_v, detail, t0)


def test_c04_threshold_identity():
    t0 = time.perf_counter()
    rng = np.random.default_rng(4)
    worst = 0.0
    for g in random_geometries(rng, 1000):
        eta = float(10 ** rng.uniform(-2, 2))
        eb = sobolev.embedding_bounds(g)
        gen = threshold_general(eb.s3_lb, eb.j6_lb, eta)
        worst = max(worst, abs(threshold_explicit(g, eta) - gen) / gen)
    assert record(4, worst <= 1e-12, f"max relative gap {worst:.1e} over 1000 (geometry, eta)", t0)


def test_c05_contraction_guarantee():
    t0 = time.perf_counter()
    rng = np.random.default_rng(5)
    worst, count = 0.0, 0
    for g in random_geometries(rng, 10_000):
        eta = float(10 ** rng.uniform(-2, 2))
        cert = certify(g, FluidParams(eta), AnalyticInflow(0.0))
        eb = cert.embedding_bounds
        # scale an analytic datum so that Phi lands uniformly in [0, threshold]
        phi = float(rng.uniform(0, 1)) * cert.threshold
        if phi > cert.threshold:
            continue
        count += 1
        worst = max(worst, contraction_beta(phi, eb.s3_lb, eb.s6_lb, eb.j6_lb, eta))
    assert record(5, count == 10_000 and worst < 1, f"max beta {worst:.4f} over {count} certified instances", t0)


def test_c05b_certified_certificates_have_beta_below_one():
    rng = np.random.default_rng(55)
    for g in random_geometries(rng, 300):
        eta = float(10 ** rng.uniform(-2, 2))
        unit = certify(g, FluidParams(eta), AnalyticInflow(1.0))
        amp = float(rng.uniform(0, 1)) * unit.threshold / unit.phi
        cert = certify(g, FluidParams(eta), AnalyticInflow(amp))
        assert cert.status is Status.CERTIFIED and cert.beta < 1


def test_c06_eigenvalue_oracle():
    t0 = time.perf_counter()
    qplus = BoxDomain((-1.0, -1.0, -1.0), (3.0, 1.0, 1.0))
    exact = 9 * math.pi ** 2 / 16
    e32 = abs(box_eigenvalue_fd(qplus, 32).value - exact) / exact
    e64 = abs(box_eigenvalue_fd(qplus, 64).value - exact) / exact
    order = observed_order(e32, e64, 1 / 33, 1 / 65)
    e_cube = abs(box_eigenvalue_fd(BoxDomain.cube(0.0, math.pi), 64).value - 3) / 3
    ok = e64 <= 0.01 and order >= 1.8 and e_cube <= 0.01
    assert record(6, ok, f"Q+ rel err {e64:.2e} at n=64, order {order:.3f}; (0,pi)^3 rel err {e_cube:.2e}", t0)


def test_c07_cutoff_sup_norms():
    t0 = time.perf_counter()
    worst = 0.0
    for eps in (0.1, 0.5, 1.0):
        s1, s2 = cutoff_sups(eps, spacing=1e-6)
        worst = max(worst, abs(s1 - 1.5 / eps) / (1.5 / eps), abs(s2 - 6 / eps ** 2) / (6 / eps ** 2))
    assert record(7, worst <= 1e-6, f"max relative error {worst:.1e} for eps in {{0.1, 0.5, 1}}", t0)


def _shell_points(q, rng, count, margin):
    lo, hi = q.support
    p = rng.uniform(lo, hi, size=(20 * count, 3))
    u = np.abs(p) / q.scales
    away = np.all((np.abs(u - 1) > margin) & (np.abs(u - 1 - q.eps) > margin), axis=1)
    in_shell = np.any(u > 1, axis=1)
    return p[away & in_shell][:count]


def test_c08_q_field_correctness():
    t0 = time.perf_counter()
    rng = np.random.default_rng(8)
    geoms = random_geometries(rng, 50)

    # exact identities: e_i on the closed box, 0 outside the inflated box
    exact_ok = True
    for g in geoms[:10]:
        for axis in (1, 3):
            q = ExtensionField(g, axis)
            box = rng.uniform(-1, 1, size=(1000, 3)) * q.scales
            corners = np.array(np.meshgrid(*[[-s, s] for s in q.scales])).reshape(3, -1).T
            target = np.zeros(3)
            target[q.k] = 1.0
            exact_ok &= bool(np.all(q(np.vstack([box, corners])) == target))
            lo, hi = q.support
            far = rng.uniform(-g.L, g.L, size=(3000, 3))
            far = far[np.any((far < lo) | (far > hi), axis=1)]
            exact_ok &= bool(np.all(q(np.vstack([far, hi[None], lo[None]])) == 0.0))

    # FD divergence residual across step halvings
    orders = []
    for g in geoms[:10]:
        for axis in (1, 3):
            q = ExtensionField(g, axis)
            pts = _shell_points(q, rng, 300, margin=4e-3)
            r = [divergence_residual_fd(q, step=s * min(q.scales), points=pts) for s in (1e-3, 5e-4, 2.5e-4)]
            orders += [observed_order(r[0], r[1], 2, 1), observed_order(r[1], r[2], 2, 1)]

    # numerical norms against the closed-form bounds
    violations, corrected_violations, worst = [], 0, 0.0
    for g in geoms:
        qb, qc = q_norm_bounds(g), q_norm_bounds_shell_corrected(g)
        for axis, b_l3, b_h1, c_l3, c_h1 in (
            (1, qb.q1_l3, qb.q1_h1, qc.q1_l3, qc.q1_h1),
            (3, qb.q3_l3, qb.q3_h1, qc.q3_l3, qc.q3_h1),
        ):
            l3, h1 = q_norm_quadrature(ExtensionField(g, axis), counts=(33, 65, 33))
            ratio = max(l3 / b_l3, h1 / b_h1)
            worst = max(worst, ratio)
            if ratio > 1:
                violations.append((g, axis))
            corrected_violations += int(l3 > c_l3 or h1 > c_h1)
    div_ok = min(orders) >= 1.8
    ok = exact_ok and div_ok and not violations
    detail = (
        f"exact {'ok' if exact_ok else 'MISMATCH'}; div order min {min(orders):.3f}; "
        f"norm bounds exceeded in {len(violations)}/100 fields (worst numeric/bound {worst:.2f}); "
        f"shell-corrected bounds exceeded in {corrected_violations}/100"
    )
    assert record(8, ok, detail, t0)


def test_c09_inflow_quadrature():
    t0 = time.perf_counter()
    A, L = 1.3, 1.0
    g = ChannelGeometry(L, 0.5, 0.5, 0.5, 0.5)

    def profile(Y, Z):
        h = np.zeros(Y.shape + (3,))
        h[..., 0] = A * np.cos(math.pi * Y / (2 * L)) * np.cos(math.pi * Z / (2 * L))
        return h

    target = (A * L, A * math.pi / math.sqrt(2), 0.0)
    errs = {}
    for n in (65, 129, 257):
        s = inflow_norms(SampledInflow.from_function(profile, L, n), g)
        errs[n] = [abs(s.l2 - target[0]), abs(s.grad_l2 - target[1]), abs(s.div_l2 - target[2])]
    # the l2 and div errors are at roundoff on every grid; the gradient norm carries the order
    order = observed_order(errs[65][1], errs[129][1], 2, 1)
    worst = max(errs[257])
    assert record(9, order >= 3.5 and worst <= 1e-8, f"Simpson order {order:.3f}; max error {worst:.1e} at n=257", t0)


def test_c10_end_to_end_certificate():
    t0 = time.perf_counter()
    fluid = FluidParams(1.0)
    assert conda_check(SEED)
    a_max = force_certificate(SEED, fluid, 0.0).amplitude_limit
    amps = np.linspace(0.0, 3 * a_max, 61)
    statuses, forces_ok = [], True
    for A in amps:
        rep = force_certificate(SEED, fluid, float(A), allow_uncertified=True)
        statuses.append(rep.certificate.status)
        if rep.certificate.certified and A > 0:
            fb = rep.bounds
            forces_ok &= math.isfinite(fb.drag_bound) and fb.drag_bound > 0
            forces_ok &= fb.drag_bound == fb.lift_bound == fb.psi
    flips = sum(1 for u, v in zip(statuses, statuses[1:]) if u != v)
    ok = flips == 1 and statuses[0] is Status.CERTIFIED and forces_ok
    n_cert = sum(s is Status.CERTIFIED for s in statuses)
    assert record(10, ok, f"{flips} status flip(s), {n_cert}/61 certified; drag = lift = Psi > 0: {forces_ok}", t0)


def test_c11_phi_discrepancy_surfacing():
    t0 = time.perf_counter()
    rng = np.random.default_rng(11)
    ok = True
    for g in random_geometries(rng, 200):
        A = float(10 ** rng.uniform(-12, 0))
        cert = certify(g, FluidParams(float(rng.uniform(0.1, 5))), AnalyticInflow(A))
        d = certificate_to_dict(cert)
        ok &= PHI_DISCREPANCY_WARNING in cert.warnings
        ok &= d["phi"] is not None and d["phi_corollary_display"] is not None
        ok &= math.isclose(cert.phi, g.L * cert.phi_corollary_display, rel_tol=1e-12)
    assert record(11, ok, "warning and both Phi values present on 200 analytic certificates", t0)

import math

import pytest
from hypothesis import given, strategies as st

from nsbounds.geometry import ChannelGeometry, bogovskii_M
from nsbounds.inflow import PHI_DISCREPANCY_WARNING, AnalyticInflow, SampledInflow, inflow_norms, phi_of_h
from nsbounds.sobolev import embedding_bounds
from nsbounds.wellposedness import (
    UNCERTIFIED_NOTE,
    UNIQUENESS_NOTE,
    FluidParams,
    SharpBoundError,
    Status,
    certify,
    contraction_beta,
    gradient_bound_rough,
    gradient_bound_rough_explicit,
    gradient_bound_sharp,
    gradient_bound_sharp_expanded,
    stokes_gradient_bound,
    threshold_explicit,
    threshold_general,
)

from conftest import geometries

etas = st.floats(1e-2, 1e2)


@given(geometries(), etas)
def test_threshold_forms_agree(g, eta):
    eb = embedding_bounds(g)
    assert threshold_explicit(g, eta) == pytest.approx(threshold_general(eb.s3_lb, eb.j6_lb, eta), rel=1e-12)


@given(geometries(), etas, st.floats(0, 1))
def test_beta_below_one_under_threshold(g, eta, frac):
    eb = embedding_bounds(g)
    phi = frac * threshold_general(eb.s3_lb, eb.j6_lb, eta)
    assert contraction_beta(phi, eb.s3_lb, eb.s6_lb, eb.j6_lb, eta) < 1


@given(geometries(), etas, st.floats(1e-3, 0.999))
def test_sharp_forms_agree_and_dominate_rough_linear_part(g, eta, frac):
    eb = embedding_bounds(g)
    phi = frac * threshold_general(eb.s3_lb, eb.j6_lb, eta)
    args = (phi, eb.s3_lb, eb.s6_lb, eb.j6_lb, eta)
    sharp = gradient_bound_sharp(*args)
    assert sharp == pytest.approx(gradient_bound_sharp_expanded(*args), rel=1e-10)
    assert sharp >= math.sqrt(2) * phi


@given(geometries(), etas, st.floats(0, 1e3))
def test_rough_forms_agree(g, eta, phi):
    eb = embedding_bounds(g)
    assert gradient_bound_rough(phi, eb.s3_lb, eta) == pytest.approx(
        gradient_bound_rough_explicit(phi, g, eta), rel=1e-13, abs=1e-300
    )


@given(geometries(), etas)
def test_threshold_increases_with_viscosity(g, eta):
    assert threshold_explicit(g, 1.01 * eta) > threshold_explicit(g, eta)


def test_sharp_zero_phi():
    assert gradient_bound_sharp(0.0, 1.0, 1.0, 1.0, 1.0) == 0.0


def test_sharp_raises_beyond_pole():
    with pytest.raises(SharpBoundError):
        gradient_bound_sharp(1e6, 1.0, 1.0, 1.0, 1.0)
    with pytest.raises(SharpBoundError):
        gradient_bound_sharp_expanded(1e6, 1.0, 1.0, 1.0, 1.0)


def test_stokes_bound():
    assert stokes_gradient_bound(2.0, 0.0, 4.0, 1.0) == pytest.approx(2 * math.sqrt(2))
    assert stokes_gradient_bound(0.0, 3.0, 4.0, 1.5) == pytest.approx(math.sqrt(2) * 3 / 3.0)
    with pytest.raises(ValueError):
        stokes_gradient_bound(1.0, -1.0, 1.0, 1.0)


@pytest.mark.parametrize("eta", [0.0, -1.0, math.inf, math.nan])
def test_bad_viscosity(eta):
    with pytest.raises(ValueError):
        FluidParams(eta)


def test_zero_inflow_certified(seed_geom):
    cert = certify(seed_geom, FluidParams(1.0), AnalyticInflow(0.0))
    assert cert.status is Status.CERTIFIED
    assert cert.phi == 0 and cert.beta == 0
    assert cert.grad_bound_rough == 0 and cert.grad_bound_sharp == 0
    assert cert.notes == (UNIQUENESS_NOTE,)


def test_uncertified_reports_formal_values(seed_geom):
    cert = certify(seed_geom, FluidParams(1.0), AnalyticInflow(1.0))
    assert cert.status is Status.NOT_CERTIFIED
    assert cert.margin < 0
    assert math.isfinite(cert.beta) and math.isfinite(cert.grad_bound_rough)
    assert cert.notes == (UNCERTIFIED_NOTE,)


def test_status_flips_at_threshold(seed_geom):
    eta = 1.0
    M = bogovskii_M(seed_geom)
    unit = phi_of_h(inflow_norms(AnalyticInflow(1.0), seed_geom), M, seed_geom)
    a_max = threshold_explicit(seed_geom, eta) / unit
    assert certify(seed_geom, FluidParams(eta), AnalyticInflow(0.999 * a_max)).certified
    assert not certify(seed_geom, FluidParams(eta), AnalyticInflow(1.001 * a_max)).certified


def test_analytic_certificate_carries_phi_warning(seed_geom):
    cert = certify(seed_geom, FluidParams(2.0), AnalyticInflow(1e-9))
    assert PHI_DISCREPANCY_WARNING in cert.warnings
    assert cert.phi_corollary_display == pytest.approx(cert.phi / seed_geom.L)


def test_sampled_certificate_has_no_phi_warning():
    L = 1.0
    g = ChannelGeometry(L, 0.8, 0.8, 0.8, 3.1)
    import numpy as np

    def fn(Y, Z):
        h = np.zeros(Y.shape + (3,))
        h[..., 0] = 1e-9 * np.cos(math.pi * Y / 2) * np.cos(math.pi * Z / 2)
        return h

    cert = certify(g, FluidParams(1.0), SampledInflow.from_function(fn, L, 65))
    assert PHI_DISCREPANCY_WARNING not in cert.warnings
    assert cert.phi_corollary_display is None
    analytic = certify(g, FluidParams(1.0), AnalyticInflow(1e-9))
    assert cert.phi == pytest.approx(analytic.phi, rel=1e-6)

import math

import numpy as np
import pytest
import scipy.integrate
import scipy.sparse.linalg as spla

from nsbounds.oracle import (
    BoxDomain,
    OracleError,
    analytic_box_eigenvalue,
    box_eigenvalue_fd,
    dirichlet_laplacian,
    divergence_residual_fd,
    divergence_residual_jacobian,
    field_norms,
    observed_order,
    piecewise_simpson_axis,
    simpson_nd,
)

QPLUS = BoxDomain((-1.0, -1.0, -1.0), (3.0, 1.0, 1.0))


def test_box_domain_validation():
    with pytest.raises(ValueError):
        BoxDomain((0.0, 1.0), (1.0, 1.0))
    assert BoxDomain.cube(0.0, 2.0).lengths == (2.0, 2.0, 2.0)


def test_analytic_eigenvalue():
    assert analytic_box_eigenvalue(QPLUS) == pytest.approx(9 * math.pi ** 2 / 16)
    assert analytic_box_eigenvalue(BoxDomain.cube(0.0, math.pi)) == pytest.approx(3.0)


def test_fd_matches_sparse_eigsh_small():
    box = BoxDomain((0.0, 0.0, 0.0), (1.0, 2.0, 1.5))
    A = dirichlet_laplacian(box, (7, 9, 5))
    ref = spla.eigsh(A, k=1, sigma=0, which="LM")[0][0]
    assert box_eigenvalue_fd(box, (7, 9, 5)).value == pytest.approx(ref, rel=1e-10)


def test_fd_matches_discrete_closed_form():
    # the 7-point stencil eigenvalue is sum 4/h^2 sin^2(pi h / 2 ell)
    box = BoxDomain.cube(0.0, math.pi)
    n = 20
    h = math.pi / (n + 1)
    exact = 3 * 4 / h ** 2 * math.sin(h / 2) ** 2
    assert box_eigenvalue_fd(box, n).value == pytest.approx(exact, rel=1e-10)


def test_amg_cg_agrees_with_dst():
    d = box_eigenvalue_fd(QPLUS, 16)
    a = box_eigenvalue_fd(QPLUS, 16, solver="amg-cg")
    assert a.value == pytest.approx(d.value, rel=1e-9)


def test_second_order_convergence():
    exact = analytic_box_eigenvalue(QPLUS)
    e = [abs(box_eigenvalue_fd(QPLUS, n).value - exact) for n in (15, 31)]
    assert observed_order(e[0], e[1], 1 / 16, 1 / 32) == pytest.approx(2.0, abs=0.05)


def test_nonconvergence_raises():
    with pytest.raises(OracleError):
        box_eigenvalue_fd(QPLUS, 16, maxiter=1)
    with pytest.raises(ValueError):
        box_eigenvalue_fd(QPLUS, 16, solver="lu")


def test_simpson_basics():
    one_d = BoxDomain((0.0,), (math.pi,))
    assert simpson_nd(lambda x: np.sin(x) ** 2, one_d, 257) == pytest.approx(math.pi / 2, abs=1e-12)
    box = BoxDomain((-1.0, 0.0, 2.0), (1.0, 3.0, 2.5))
    assert simpson_nd(lambda x, y, z: np.ones_like(x), box, (3, 5, 7)) == pytest.approx(3.0, rel=1e-15)
    with pytest.raises(ValueError):
        simpson_nd(lambda x: x, one_d, 4)


def test_simpson_matches_scipy():
    x = np.linspace(0.0, 2.0, 65)
    f = np.exp(x) * np.cos(3 * x)
    ours = simpson_nd(lambda t: np.exp(t) * np.cos(3 * t), BoxDomain((0.0,), (2.0,)), 65)
    assert ours == pytest.approx(scipy.integrate.simpson(f, x=x), rel=1e-13)


def test_simpson_cosine_profile_square():
    L, A = 1.7, 0.9
    box = BoxDomain((-L, -L), (L, L))
    val = simpson_nd(
        lambda y, z: (A * np.cos(math.pi * y / (2 * L)) * np.cos(math.pi * z / (2 * L))) ** 2, box, 257
    )
    assert val == pytest.approx(A ** 2 * L ** 2, abs=1e-10)


def test_simpson_fourth_order():
    f = lambda x: np.exp(np.sin(x))  # noqa: E731
    box = BoxDomain((0.0,), (1.0,))
    ref = simpson_nd(f, box, 4097)
    e = [abs(simpson_nd(f, box, n) - ref) for n in (17, 33)]
    assert observed_order(e[0], e[1], 2, 1) > 3.8


def test_simpson_deterministic():
    box = BoxDomain((0.0, 0.0, 0.0), (1.0, 1.0, 1.0))
    f = lambda x, y, z: np.sin(7 * x) * np.exp(y) / (1 + z)  # noqa: E731
    assert simpson_nd(f, box, 33) == simpson_nd(f, box, 33)


def test_divergence_of_simple_fields():
    box = BoxDomain((-1.0, -1.0, -1.0), (1.0, 1.0, 1.0))
    const = lambda p: np.tile([1.0, -2.0, 0.5], (len(p), 1))  # noqa: E731
    lin = lambda p: np.column_stack([p[:, 0], p[:, 1], -2 * p[:, 2]])  # noqa: E731
    assert divergence_residual_fd(const, box, 5) == 0.0
    assert divergence_residual_fd(lin, box, 5) < 1e-12
    with pytest.raises(ValueError):
        divergence_residual_fd(lin, box, 5, step=0.0)


def test_divergence_fd_second_order():
    field = lambda p: np.column_stack([np.sin(p[:, 0]), np.zeros(len(p)), np.zeros(len(p))])  # noqa: E731
    pts = np.array([[0.3, 0.1, 0.2]])
    r = [abs(divergence_residual_fd(field, step=s, points=pts) - math.cos(0.3)) for s in (1e-2, 5e-3)]
    assert observed_order(r[0], r[1], 2, 1) == pytest.approx(2.0, abs=0.05)


def test_divergence_jacobian_trace():
    pts = np.zeros((4, 3))
    J = lambda p: np.tile(np.diag([1.0, 2.0, -3.5]), (len(p), 1, 1))  # noqa: E731
    assert divergence_residual_jacobian(J, pts) == 0.5


def test_piecewise_axis_and_field_norms():
    x, w = piecewise_simpson_axis([-2.0, -1.0, 1.0, 2.0], (5, 9, 5))
    assert len(x) == 17 and w.sum() == pytest.approx(4.0)
    axes = [piecewise_simpson_axis([0.0, 0.5, 1.0], (5, 5))] * 3
    field = lambda p: np.column_stack([p[:, 0], np.zeros(len(p)), np.zeros(len(p))])  # noqa: E731
    jac = lambda p: np.tile(np.diag([1.0, 0.0, 0.0]), (len(p), 1, 1))  # noqa: E731
    l3, h1 = field_norms(lambda p: (field(p), jac(p)), axes)
    assert l3 == pytest.approx(0.25 ** (1 / 3), rel=1e-12)
    assert h1 == pytest.approx(1.0, rel=1e-14)

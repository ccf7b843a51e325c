import numpy as np
import pytest

from dec_core import de_rham
from leray_pressure import (
    divergence_residual, expected_harmonic_dimension, gradient_part, harmonic_basis, infsup_constant,
    infsup_quotients, leray_project, leray_project_dirichlet, poincare_constant, pressure_mean,
    pressure_recover,
)
from mesh_complex import ValidationError


def _norm(ops, x):
    return np.sqrt(ops.inner(x, x, 1))


@pytest.mark.parametrize('name', ['torus_flow', 'perturbed_flow', 'square_flow', 'prism_flow'])
def test_projection_properties(name, request, rng):
    flow = request.getfixturevalue(name)
    ops, leray = flow.ops, flow.leray
    n1 = flow.complex.n_dual[1]
    x, y = leray.mask(rng.standard_normal(n1)), leray.mask(rng.standard_normal(n1))
    px, py = leray_project(leray, x), leray_project(leray, y)

    assert _norm(ops, leray_project(leray, px) - px) < 1e-11 * _norm(ops, x)
    assert abs(ops.inner(px, y, 1) - ops.inner(x, py, 1)) < 1e-11 * _norm(ops, x) * _norm(ops, y)
    assert _norm(ops, px) <= _norm(ops, x) * (1 + 1e-12)
    assert divergence_residual(leray, px) < 1e-10 * np.abs(ops.M1 * x).max()
    np.testing.assert_allclose(gradient_part(leray, x) + px, x, atol=1e-13 * np.abs(x).max())


def test_no_slip_projection_vanishes_on_wall(square_flow, rng):
    leray = square_flow.leray
    assert leray.bounded
    p = leray_project(leray, rng.standard_normal(square_flow.complex.n_dual[1]))
    assert np.all(p[~leray.interior_mask] == 0.0)


def test_dirichlet_projection_rejects_wall_values(square_flow):
    leray = square_flow.leray
    w = np.zeros(square_flow.complex.n_dual[1])
    w[~leray.interior_mask] = 1.0
    with pytest.raises(ValidationError):
        leray_project_dirichlet(leray, w)


def test_dirichlet_projection_needs_bounded_complex(torus_flow):
    with pytest.raises(ValidationError):
        leray_project_dirichlet(torus_flow.leray, np.zeros(torus_flow.complex.n_dual[1]))


@pytest.mark.parametrize('name', ['torus_flow', 'prism_flow'])
def test_harmonic_basis(name, request):
    flow = request.getfixturevalue(name)
    ops = flow.ops
    basis = harmonic_basis(flow.leray, np.random.default_rng(0))
    assert basis.dimension == expected_harmonic_dimension(flow.complex) == flow.complex.dimension
    gram = np.array([[ops.inner(a, b, 1) for b in basis.vectors] for a in basis.vectors])
    np.testing.assert_allclose(gram, np.eye(basis.dimension), atol=1e-8)
    for eta in basis.vectors:
        curl, div = ops.d1(eta), ops.divergence(eta)
        assert ops.inner(curl, curl, 2) + np.sum(div ** 2 / ops.M0) < 1e-6


def test_constant_field_is_harmonic(torus_flow):
    ops = torus_flow.ops
    basis = harmonic_basis(torus_flow.leray)
    v = de_rham(torus_flow.complex, lambda p: np.tile([1.0, 0.5], (p.shape[0], 1)), 1)
    residual = basis.remove(ops, v)
    assert _norm(ops, residual) < 1e-3 * _norm(ops, v)


def test_square_has_no_harmonic_fields(square_flow):
    assert expected_harmonic_dimension(square_flow.complex) == 0
    with pytest.raises(ValidationError):
        harmonic_basis(square_flow.leray)
    with pytest.raises(ValidationError):
        poincare_constant(square_flow.leray)


def test_poincare_constant_on_equilateral_torus(torus_flow):
    # lowest continuum eigenvalue on [0, 2pi) x [0, sqrt(3) pi) is 1
    result = poincare_constant(torus_flow.leray, np.random.default_rng(1))
    assert abs(result.value - 1.0) < 0.1


@pytest.mark.parametrize('name', ['torus_flow', 'square_flow'])
def test_infsup_bounds_every_quotient(name, request):
    flow = request.getfixturevalue(name)
    result = infsup_constant(flow.leray, np.random.default_rng(2))
    assert result.value > 0.0
    assert result.value == pytest.approx(np.sqrt(result.ritz_values[0]))
    quotients = infsup_quotients(flow.leray, 50, np.random.default_rng(3))
    assert quotients.shape == (50,)
    assert quotients.min() >= result.value * (1 - 1e-8)


def test_pressure_of_uniform_flow_vanishes(torus_flow):
    v = de_rham(torus_flow.complex, lambda p: np.tile([0.7, -0.2], (p.shape[0], 1)), 1)
    p = pressure_recover(torus_flow.advection, torus_flow.leray, v)
    assert np.abs(p).max() < 1e-10


def test_pressure_is_mean_zero(perturbed_flow, rng):
    v = leray_project(perturbed_flow.leray, rng.standard_normal(perturbed_flow.complex.n_dual[1]))
    p = pressure_recover(perturbed_flow.advection, perturbed_flow.leray, v)
    assert abs(pressure_mean(perturbed_flow.ops, p)) < 1e-12 * max(np.abs(p).max(), 1.0)

import numpy as np
import pytest

from dec_core import assemble_operators, de_rham
from mesh_complex import ValidationError, build_mesh, random_dual_cycles
from reconstruction_advection import (
    EXTRUSION_VARIANTS, advect_loop, boundary_defect, build_advection, build_reconstruction, chain_lie, contraction,
    contraction_matrix, energy_identity_residual, face_velocity, kinetic_energy_density, lamb_bilinear,
    lamb_vector, lie_derivative, lie_matrix, polarised_residual, polarised_two_residual, reconstruct_velocity,
    wedge_11, wedge_12,
)
from verification import lie_rate


def constant_vector(*c):
    c = np.asarray(c, dtype=float)
    return lambda points: np.broadcast_to(c, (points.shape[0], c.size))


def linear_vector(points):
    x, y = points[..., 0], points[..., 1]
    return np.stack([0.3 + 1.2 * x - 0.7 * y, -0.4 + 0.5 * x + 0.9 * y], axis=-1)


@pytest.mark.parametrize('variant', ['gram', 'linear'])
@pytest.mark.parametrize('name, c', [
    ('torus_ops', (1.0, -0.5)),
    ('square_ops', (0.3, 0.8)),
    ('prism_ops', (1.0, -0.5, 0.25)),
])
def test_reconstruction_exact_on_constants(name, c, variant, request):
    ops = request.getfixturevalue(name)
    recon = build_reconstruction(ops)
    v = de_rham(ops.complex, constant_vector(*c), 1)
    u = reconstruct_velocity(recon, v, variant)
    assert u.shape == (ops.complex.n_dual[0], len(c))
    np.testing.assert_allclose(u, np.broadcast_to(c, u.shape), atol=1e-12)
    np.testing.assert_allclose(kinetic_energy_density(recon, v, variant), 0.5 * np.dot(c, c), rtol=1e-12)


@pytest.mark.parametrize('mesh', ['square:structured:8', 'square:perturbed:8:0.15'])
def test_linear_reconstruction_exact_on_linear_fields(mesh):
    cx = build_mesh(mesh, seed=4)
    recon = build_reconstruction(assemble_operators(cx))
    u = reconstruct_velocity(recon, de_rham(cx, linear_vector, 1), 'linear')
    # dual vertices whose three dual edges are all full edges
    star = abs(cx.dual_incidence[0]).T.tocsr()
    half = ((recon.edge_tail < 0) | (recon.edge_head < 0)).astype(float)
    interior = (star @ half == 0.0) & (np.diff(star.indptr) == 3)
    assert interior.sum() > cx.n_dual[0] // 2
    np.testing.assert_allclose(u[interior], linear_vector(cx.dual_vertices[interior]), atol=1e-10)


def test_face_velocity_exact_on_constants(perturbed_flow):
    ops = perturbed_flow.ops
    v = de_rham(ops.complex, constant_vector(0.4, -1.2), 1)
    u = face_velocity(perturbed_flow.advection.recon, v)
    np.testing.assert_allclose(u, np.broadcast_to([0.4, -1.2], u.shape), atol=1e-12)


def test_contraction_matrix_matches(torus_flow, rng):
    recon = torus_flow.advection.recon
    n1 = torus_flow.complex.n_dual[1]
    v, alpha = rng.standard_normal(n1), rng.standard_normal(n1)
    u, a = reconstruct_velocity(recon, v, 'linear'), reconstruct_velocity(recon, alpha, 'linear')
    np.testing.assert_allclose(contraction_matrix(recon, v) @ alpha, np.sum(u * a, axis=1), atol=1e-12)
    gram = contraction_matrix(recon, v, 'gram') @ alpha
    u, a = reconstruct_velocity(recon, v), reconstruct_velocity(recon, alpha)
    np.testing.assert_allclose(gram, np.sum(u * a, axis=1), atol=1e-12)


@pytest.mark.parametrize('variant', EXTRUSION_VARIANTS)
def test_energy_identity_every_variant(perturbed_flow, variant, rng):
    adv = build_advection(perturbed_flow.ops, variant)
    for _ in range(5):
        v = rng.standard_normal(perturbed_flow.complex.n_dual[1])
        assert energy_identity_residual(adv, v) < 1e-12


@pytest.mark.parametrize('name', ['perturbed_flow', 'square_flow', 'prism_flow'])
def test_polarised_identities(name, request, rng):
    adv = request.getfixturevalue(name).advection
    n1 = adv.complex.n_dual[1]
    for _ in range(3):
        x, y, z = (rng.standard_normal(n1) for _ in range(3))
        assert polarised_residual(adv, x, y, z) < 1e-12
        assert polarised_two_residual(adv, x, y) < 1e-12


def test_lamb_vector_is_contraction_of_vorticity(perturbed_flow, rng):
    adv = perturbed_flow.advection
    v = rng.standard_normal(perturbed_flow.complex.n_dual[1])
    q = lamb_vector(adv, v)
    np.testing.assert_allclose(q, lamb_bilinear(adv, v, v), atol=1e-13 * np.abs(q).max())
    np.testing.assert_allclose(q, contraction(adv, v, perturbed_flow.ops.d1(v)), atol=1e-12 * np.abs(q).max())


def test_wedge_antisymmetry(perturbed_flow, rng):
    adv = perturbed_flow.advection
    n1 = perturbed_flow.complex.n_dual[1]
    a, b = rng.standard_normal(n1), rng.standard_normal(n1)
    ab, ba = wedge_11(adv, a, b), wedge_11(adv, b, a)
    np.testing.assert_allclose(ab, -ba, atol=1e-13 * np.abs(ab).max())
    np.testing.assert_allclose(wedge_11(adv, a, a), 0.0, atol=1e-13 * np.abs(ab).max())


def test_wedge_12_needs_prism(torus_flow, rng):
    n1, n2 = torus_flow.complex.n_dual[1], torus_flow.complex.n_dual[2]
    with pytest.raises(ValidationError):
        wedge_12(torus_flow.advection, rng.standard_normal(n1), rng.standard_normal(n2))


def test_lie_derivative_of_exact_form(perturbed_flow, rng):
    adv = perturbed_flow.advection
    ops = perturbed_flow.ops
    v = rng.standard_normal(ops.complex.n_dual[1])
    grad = ops.d0(rng.standard_normal(ops.complex.n_dual[0]))
    expected = ops.d0(contraction_matrix(adv.recon, v) @ grad)
    np.testing.assert_allclose(lie_derivative(adv, v, grad), expected, atol=1e-12 * np.abs(expected).max())


def test_lie_matrix_rejects_degree(torus_flow, rng):
    with pytest.raises(ValidationError):
        lie_matrix(torus_flow.advection, rng.standard_normal(torus_flow.complex.n_dual[1]), k=3)


@pytest.mark.parametrize('name', ['perturbed_flow', 'prism_flow'])
def test_chain_lie_preserves_cycles(name, request, rng):
    flow = request.getfixturevalue(name)
    adv = flow.advection
    v = rng.standard_normal(flow.complex.n_dual[1])
    for gamma in random_dual_cycles(flow.complex, rng, count=3):
        moved = chain_lie(adv, v) @ gamma
        assert boundary_defect(adv, moved) < 1e-12 * np.abs(moved).max()


def test_advect_loop_rejects_open_chain(torus_flow, rng):
    adv = torus_flow.advection
    v = rng.standard_normal(torus_flow.complex.n_dual[1])
    open_chain = np.zeros(torus_flow.complex.n_dual[1])
    open_chain[0] = 1.0
    with pytest.raises(ValidationError):
        advect_loop(adv, v, v, open_chain, 1e-3)


def test_advect_loop_keeps_cycle_closed(torus_flow, rng):
    adv = torus_flow.advection
    v = rng.standard_normal(torus_flow.complex.n_dual[1])
    gamma = random_dual_cycles(torus_flow.complex, rng, count=1)[0]
    moved = advect_loop(adv, v, v, gamma, 1e-3)
    assert boundary_defect(adv, moved) < 1e-10 * np.abs(moved).max()


@pytest.mark.slow
def test_lie_derivative_converges_on_equilateral_torus():
    table = lie_rate('torus:equilateral:8', [8, 12, 16, 24])
    fit = table.fit('L2h')
    assert fit is not None
    assert fit.slope >= 0.8
    assert table.summary()['norms']['L2h']['passed']

import json

import numpy as np
import pytest
import scipy.sparse as sp
from scipy.io import mmread

from dec_core import (
    Cochain, ScalarPoissonSolver, SparseSPDSolver, assemble_operators, de_rham, export_operators,
    hodge_error_probe, inner_product, make_cochain, norm_H1h, norm_L2h, norm_Linf_h, norm_l2, norm_rec,
    read_cochain, values_of, write_cochain,
)
from mesh_complex import CochainMismatchError, ValidationError


def constant_vector(*c):
    c = np.asarray(c, dtype=float)
    return lambda points: np.broadcast_to(c, (points.shape[0], c.size))


def test_equilateral_stars(torus_ops):
    np.testing.assert_allclose(torus_ops.M1, np.sqrt(3.0), rtol=1e-12)
    np.testing.assert_allclose(torus_ops.M0, torus_ops.M0[0], rtol=1e-12)
    np.testing.assert_allclose(torus_ops.M2, torus_ops.M2[0], rtol=1e-12)


@pytest.mark.parametrize('name', ['torus_ops', 'square_ops', 'prism_ops'])
def test_dual_chain_property(name, request, rng):
    ops = request.getfixturevalue(name)
    q = rng.standard_normal(ops.complex.n_dual[0])
    assert np.abs(ops.d1(ops.d0(q))).max() < 1e-12 * np.abs(q).max() * 10
    if ops.dimension == 3:
        v = rng.standard_normal(ops.complex.n_dual[1])
        assert np.abs(ops.d2(ops.d1(v))).max() < 1e-12 * np.abs(v).max() * 10


@pytest.mark.parametrize('name', ['torus_ops', 'square_ops', 'prism_ops'])
def test_summation_by_parts(name, request, rng):
    ops = request.getfixturevalue(name)
    q = rng.standard_normal(ops.complex.n_dual[0])
    w = rng.standard_normal(ops.complex.n_dual[1])
    lhs = ops.inner(ops.d0(q), w, 1)
    rhs = float(q @ ops.divergence(w))
    scale = np.sqrt(ops.inner(ops.d0(q), ops.d0(q), 1) * ops.inner(w, w, 1))
    assert abs(lhs - rhs) <= 1e-11 * scale


@pytest.mark.parametrize('name', ['torus_ops', 'prism_ops'])
def test_codifferential_is_adjoint(name, request, rng):
    ops = request.getfixturevalue(name)
    v = rng.standard_normal(ops.complex.n_dual[1])
    omega = rng.standard_normal(ops.complex.n_dual[2])
    lhs = ops.inner(ops.d1(v), omega, 2)
    rhs = ops.inner(v, ops.codifferential(omega), 1)
    scale = np.sqrt(ops.inner(ops.d1(v), ops.d1(v), 2) * ops.inner(omega, omega, 2))
    assert abs(lhs - rhs) <= 1e-11 * scale


def test_laplacian_kernel_is_constants(torus_ops):
    ones = np.ones(torus_ops.complex.n_dual[0])
    assert np.abs(torus_ops.laplacian @ ones).max() < 1e-12


def test_poisson_solver(torus_ops, rng):
    b = rng.standard_normal(torus_ops.complex.n_dual[0])
    solver = torus_ops.laplacian_solver
    x = solver.solve(b)
    assert solver.residual(x, b) < 1e-9
    assert abs(np.dot(torus_ops.M0, x)) < 1e-9 * np.abs(x).max() * torus_ops.M0.sum()


def test_spd_solver_direct_and_iterative(rng):
    n = 50
    A = sp.diags([-np.ones(n - 1), 4.0 * np.ones(n), -np.ones(n - 1)], [-1, 0, 1], format='csr')
    b = rng.standard_normal(n)
    direct = SparseSPDSolver(A).solve(b)
    iterative = SparseSPDSolver(A, rtol=1e-13, direct_limit=0).solve(b)
    np.testing.assert_allclose(A @ direct, b, atol=1e-12)
    np.testing.assert_allclose(iterative, direct, atol=1e-10)


def test_scalar_poisson_solver_mean_zero(rng):
    n = 20
    A = sp.diags([-np.ones(n - 1), 2.0 * np.ones(n), -np.ones(n - 1)], [-1, 0, 1], format='lil')
    A[0, 0] = A[n - 1, n - 1] = 1.0
    weights = rng.random(n) + 0.5
    solver = ScalarPoissonSolver(A.tocsr(), weights)
    x = solver.solve(rng.standard_normal(n))
    assert abs(weights @ x) < 1e-10


@pytest.mark.parametrize('name', ['torus', 'perturbed_torus', 'prism'])
def test_constant_field_is_closed(name, request):
    cx = request.getfixturevalue(name)
    ops = assemble_operators(cx)
    c = (1.0, -0.5) if cx.dimension == 2 else (1.0, -0.5, 0.25)
    v = de_rham(cx, constant_vector(*c), 1)
    assert np.abs(ops.d1(v)).max() < 1e-12 * np.abs(v).max() * 100


def test_de_rham_two_form_of_unity(torus):
    areas = de_rham(torus, lambda points: np.ones(points.shape[0]), 2)
    np.testing.assert_allclose(areas, torus.dual_areas, rtol=1e-12)
    assert areas.sum() == pytest.approx(2 * np.pi * np.sqrt(3) * np.pi, rel=1e-12)


def test_de_rham_rejects_degree(torus):
    with pytest.raises(ValidationError):
        de_rham(torus, constant_vector(1.0, 0.0), 3)


@pytest.mark.parametrize('name', ['torus', 'perturbed_torus'])
def test_hodge_probe_exact_on_constants(name, request):
    cx = request.getfixturevalue(name)
    assert hodge_error_probe(cx, constant_vector(0.7, -1.1), 1).max() < 1e-12
    assert hodge_error_probe(cx, lambda points: np.full(points.shape[0], 2.5), 0).max() < 1e-12


def test_norms(torus_ops, rng):
    v = rng.standard_normal(torus_ops.complex.n_dual[1])
    assert norm_L2h(torus_ops, v) == pytest.approx(np.sqrt(np.sum(torus_ops.M1 * v * v)))
    assert norm_l2(v) == pytest.approx(np.linalg.norm(v))
    assert norm_H1h(torus_ops, v) >= norm_L2h(torus_ops, v)
    # M1 = sqrt(3) on every edge of the equilateral lattice
    assert norm_Linf_h(torus_ops, v) == pytest.approx(np.max(np.abs(v)) / 3.0 ** 0.25)
    assert norm_rec(torus_ops, v) == pytest.approx(np.max(np.abs(v) / torus_ops.complex.dual_lengths))
    assert inner_product(torus_ops, v, v, 1) == pytest.approx(norm_L2h(torus_ops, v) ** 2)


def test_cochain_arithmetic_checks(torus, square):
    a = make_cochain(torus, 1, np.ones(torus.n_dual[1]))
    b = make_cochain(torus, 1)
    assert isinstance(a + b, Cochain)
    np.testing.assert_array_equal((2.0 * a - b).values, 2.0 * np.ones(torus.n_dual[1]))
    with pytest.raises(CochainMismatchError):
        a + make_cochain(torus, 2)
    with pytest.raises(CochainMismatchError):
        a + make_cochain(square, 1)
    with pytest.raises(CochainMismatchError):
        make_cochain(torus, 1, np.ones(3))
    with pytest.raises(CochainMismatchError):
        values_of(a, square, 1)
    with pytest.raises(CochainMismatchError):
        values_of(a, torus, 0)


def test_cochain_file(torus, square, tmp_path, rng):
    values = rng.standard_normal(torus.n_dual[1])
    path = write_cochain(tmp_path / 'v.cochain', make_cochain(torus, 1, values), time=0.25, label='probe')
    cochain, time, label = read_cochain(path, torus)
    np.testing.assert_array_equal(cochain.values, values)
    assert (time, label, cochain.degree) == (0.25, 'probe', 1)
    with pytest.raises(CochainMismatchError):
        read_cochain(path, square)


def test_cochain_file_rejects_garbage(tmp_path):
    path = tmp_path / 'bad.cochain'
    path.write_text('not a cochain\n')
    with pytest.raises(ValidationError):
        read_cochain(path)


def test_export_operators(torus_ops, tmp_path):
    index_path = export_operators(torus_ops, tmp_path / 'ops')
    index = json.loads(index_path.read_text())
    assert index['schema_version'] == 1
    assert {'D0', 'D1', 'dual_D0', 'dual_D1', 'M0', 'M1', 'M2', 'L_h'} <= set(index['matrices'])
    M1 = mmread(str(tmp_path / 'ops' / 'M1.mtx'))
    np.testing.assert_allclose(M1.diagonal(), torus_ops.M1, rtol=1e-15)

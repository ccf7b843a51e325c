import numpy as np
import pytest

from mesh_complex import (
    ConfigError, IntegrationError, MeshError, MeshSpec, StepRejected, ValidationError, audit_mesh,
    build_mesh, dual_boundary, homology_basis, homology_cycle, horizontal_dual_cycle, parse_mesh_spec,
    random_dual_cycles, read_mesh, write_mesh,
)


def test_torus_counts(torus):
    n = 8
    assert torus.dimension == 2
    assert torus.n_primal == (n * n, 3 * n * n, 2 * n * n)
    assert torus.n_dual == (2 * n * n, 3 * n * n, n * n)
    assert torus.euler_characteristic == 0
    np.testing.assert_allclose(torus.periods, [2 * np.pi, np.sqrt(3) * np.pi])


def test_prism_counts(prism):
    n, layers = 4, 3
    V = n * n * layers
    assert prism.dimension == 3
    assert prism.n_primal == (V, 4 * V, 5 * V, 2 * V)
    assert prism.euler_characteristic == 0
    np.testing.assert_allclose(prism.periods, [2 * np.pi, np.sqrt(3) * np.pi, 2 * np.pi])


def test_square_is_a_disc(square):
    assert square.is_bounded and not square.is_periodic
    assert square.euler_characteristic == 1
    assert square.dual_boundary_mask.any()


@pytest.mark.parametrize('name', ['torus', 'perturbed_torus', 'square', 'prism'])
def test_chain_property(name, request):
    cx = request.getfixturevalue(name)
    for mats in (cx.incidence, cx.dual_incidence):
        for k in range(len(mats) - 1):
            product = mats[k + 1] @ mats[k]
            assert product.nnz == 0 or abs(product).max() == 0


@pytest.mark.parametrize('name', ['torus', 'perturbed_torus', 'square', 'prism'])
def test_positive_measures(name, request):
    cx = request.getfixturevalue(name)
    for measures in cx.primal_measures + cx.dual_measures:
        assert np.all(measures > 0.0)


def test_equilateral_audit_is_case_b(torus):
    audit = audit_mesh(torus)
    assert audit.is_case_b
    assert audit.containment_margin > 0.0
    assert audit.quasi_uniformity == pytest.approx(1.0)
    assert audit.max_valence == 6
    report = audit.to_dict()
    assert report['case_b'] is True
    assert report['counts'] == list(torus.n_primal)


def test_perturbed_audit(perturbed_torus):
    audit = audit_mesh(perturbed_torus)
    assert not audit.is_case_b
    assert audit.containment_margin > 0.0
    assert audit.orthogonality_residual < 1e-10
    assert audit.max_gram_condition < 10.0


@pytest.mark.parametrize('n', [4, 8, 16])
@pytest.mark.parametrize('perturbation', [0.05, 0.15])
def test_perturbed_square_builds(n, perturbation):
    structured = build_mesh(f'square:structured:{n}')
    cx = build_mesh(f'square:perturbed:{n}:{perturbation}', seed=2)
    assert cx.n_primal == structured.n_primal
    assert cx.euler_characteristic == 1
    assert audit_mesh(cx).containment_margin > 0.0
    moved = np.any(cx.vertices != structured.vertices, axis=1)
    assert moved.any()
    # wall vertices stay on the wall
    on_wall = np.isclose(structured.vertices, 0.0) | np.isclose(structured.vertices, np.pi)
    assert not np.any(moved & on_wall.any(axis=1))


def test_perturbation_is_seeded():
    a = build_mesh('torus:perturbed:8:0.15', seed=5)
    b = build_mesh('torus:perturbed:8:0.15', seed=5)
    c = build_mesh('torus:perturbed:8:0.15', seed=6)
    assert a.tag == b.tag
    assert a.tag != c.tag
    np.testing.assert_array_equal(a.vertices, b.vertices)


def test_parse_mesh_spec():
    spec = parse_mesh_spec('prism:equilateral:8:4')
    assert spec == MeshSpec(kind='prism', family='equilateral', n=8, layers=4)
    assert spec.with_resolution(16).layers == 8
    assert str(spec) == 'prism:equilateral:8:4'
    perturbed = parse_mesh_spec('torus:perturbed:32')
    assert perturbed.perturbation == pytest.approx(0.15)
    assert parse_mesh_spec('torus:perturbed:32:0.1').perturbation == pytest.approx(0.1)


@pytest.mark.parametrize('text', ['torus:equilateral', 'sphere:equilateral:8', 'prism:equilateral:8',
                                  'torus:equilateral:8:3', 'torus:equilateral:x'])
def test_parse_mesh_spec_rejects(text):
    with pytest.raises(MeshError):
        parse_mesh_spec(text)


@pytest.mark.parametrize('text', ['torus:equilateral:7', 'torus:equilateral:2', 'torus:hexagonal:8',
                                  'torus:perturbed:8:0.9'])
def test_build_mesh_rejects(text):
    with pytest.raises(MeshError):
        build_mesh(text)


def test_error_hierarchy():
    assert issubclass(MeshError, ValidationError)
    assert MeshError('x').exit_code == 1
    assert IntegrationError('x').exit_code == 2
    assert StepRejected('x', suggested_dt=0.1).suggested_dt == 0.1
    report = ConfigError('bad value', field='integration.T').to_dict()
    assert report == {'error': 'ConfigError', 'module': 'cli', 'message': 'bad value', 'field': 'integration.T'}


@pytest.mark.parametrize('name', ['torus', 'prism'])
def test_homology_cycles_are_closed(name, request):
    cx = request.getfixturevalue(name)
    basis = homology_basis(cx)
    assert len(basis) == cx.dimension
    for chain in basis:
        assert np.abs(dual_boundary(cx, chain)).max() < 1e-12
        assert np.abs(chain).sum() > 0


@pytest.mark.parametrize('n', [8, 16, 32])
@pytest.mark.parametrize('y0', [0.0, 1.36, 4.0])
def test_horizontal_cycle_stays_near_its_line(n, y0):
    cx = build_mesh(f'torus:perturbed:{n}:0.15', seed=3)
    chain = horizontal_dual_cycle(cx, y0)
    assert np.abs(dual_boundary(cx, chain)).max() < 1e-12
    used = np.nonzero(chain)[0]
    ys = np.mod(cx.layer.dual_segments[used, :, 1], cx.periods[1])
    gap = np.abs(ys - np.mod(y0, cx.periods[1]))
    gap = np.minimum(gap, cx.periods[1] - gap)
    assert gap.max() <= 3.0 * cx.h
    # one pass around the torus: net x travel equals the period
    seg = cx.layer.dual_segments[used]
    travel = np.sum(chain[used] * (seg[:, 1, 0] - seg[:, 0, 0]))
    assert travel == pytest.approx(cx.periods[0], rel=1e-12)


def test_homology_cycle_needs_periodic(square):
    with pytest.raises(MeshError):
        homology_cycle(square, axis=0)
    assert homology_basis(square) == []


def test_random_dual_cycles(torus, rng):
    chains = random_dual_cycles(torus, rng, count=5)
    assert chains.shape == (5, torus.n_dual[1])
    assert np.abs(torus.dual_incidence[0].T @ chains.T).max() < 1e-12


@pytest.mark.parametrize('name', ['perturbed_torus', 'square', 'prism'])
def test_mesh_file(name, request, tmp_path):
    cx = request.getfixturevalue(name)
    path = write_mesh(cx, tmp_path / 'mesh.decflow-mesh')
    assert path.read_text().startswith('# decflow-mesh\nversion 1\n')
    back = read_mesh(path)
    assert back.tag == cx.tag
    assert back.n_primal == cx.n_primal
    np.testing.assert_allclose(back.dual_lengths, cx.dual_lengths, rtol=1e-14)

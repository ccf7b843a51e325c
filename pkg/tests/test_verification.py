import numpy as np
import pytest

from mesh_complex import ValidationError, build_mesh
from verification import (
    CASE_B_MINIMUM, REFERENCES, ConvergenceTable, TOLERANCES, build_reference, constant_field, coupled_step,
    error_norms, expected_rate, family_letter, family_spec, fit_slope, flow_for_reference, hodge_rate,
    ladder_family, nu_uniformity_study, projection_rate, rate_study, reconstruction_rate, restrict,
    run_identity_suite, taylor_green_2d, truncation_error, truncation_study, whitney_l2_error,
)


@pytest.mark.parametrize('name', ['tg2d', 'tg2d-mean', 'abc3d', 'constant', 'noslip'])
def test_reference_oracles_pass(name):
    ref = build_reference(name)
    report = ref.check()
    assert report['divergence_symbolic']
    assert report['divergence_max'] <= 1e-12
    if ref.exact:
        assert report['pde_symbolic']


def test_viscous_taylor_green_oracle():
    report = build_reference('tg2d', nu=0.01).check()
    assert report['pde_symbolic']
    assert report['time_derivative_error'] < 1e-6


def test_unknown_reference():
    assert 'tg2d' in REFERENCES
    with pytest.raises(ValidationError):
        build_reference('poiseuille')


def test_taylor_green_energy():
    ref = taylor_green_2d()
    assert ref.energy() == pytest.approx(7 * np.sqrt(3) * np.pi ** 2 / 16, rel=1e-12)
    assert ref.circulation(0.0, y0=0.0) == pytest.approx(0.0, abs=1e-12)


def test_fit_slope_exact_line():
    h = np.array([0.4, 0.2, 0.1, 0.05])
    fit = fit_slope(h, 3.0 * h ** 2)
    assert fit.slope == pytest.approx(2.0)
    assert fit.points == 4
    assert abs(fit.curvature) < 1e-10


def _table(errors, floor=0.0):
    table = ConvergenceTable(family='B', label='synthetic', floor=floor)
    for n, e in zip((8, 16, 32, 64), errors):
        table.add(n, 2.0 / n, L2h=e)
    table.expect('L2h', target=2.0)
    return table


def test_convergence_table_second_order():
    h = 2.0 / np.array([8, 16, 32, 64])
    summary = _table(5.0 * h ** 2).summary()
    entry = summary['norms']['L2h']
    assert entry['passed']
    assert entry['flags'] == []
    assert entry['fit']['slope'] == pytest.approx(2.0)
    assert summary['resolutions'] == [8, 16, 32, 64]


def test_convergence_table_flags():
    floored = _table([1e-2, 2.5e-3, 1e-9, 1e-10], floor=1e-11)
    assert floored.fit('L2h') is None
    assert set(floored.flags('L2h')) == {'floor', 'too_few_points'}
    assert floored.summary()['norms']['L2h']['passed'] is False

    bumpy = _table([1e-2, 5e-3, 6e-3, 1e-3])
    assert bumpy.fit('L2h') is None
    assert 'non_monotone' in bumpy.flags('L2h')


def test_convergence_table_rows():
    rows = _table([4.0, 1.0, 0.25, 0.0625]).rows()
    assert len(rows) == 4
    assert rows[0] == {'family': 'B', 'label': 'synthetic', 'norm': 'L2h', 'n': 8, 'h': 0.25, 'error': 4.0}


def test_families():
    assert family_spec('square', 'B').family == 'structured'
    assert family_spec('torus', 'B').family == 'equilateral'
    perturbed = family_spec('torus', 'A', perturbation=0.1)
    assert (perturbed.family, perturbed.perturbation) == ('perturbed', 0.1)
    assert (expected_rate('A'), expected_rate('B')) == (1.0, 2.0)
    with pytest.raises(ValidationError):
        family_spec('torus', 'C')


def test_family_letter_comes_from_the_audit(torus, perturbed_torus, square):
    assert family_letter(torus) == 'B'
    assert family_letter(perturbed_torus) == 'A'
    assert family_letter(square) == 'A'
    assert ladder_family([torus, torus]) == 'B'
    assert ladder_family([torus, perturbed_torus]) == 'A'


def test_coupled_step():
    dt, steps = coupled_step(1.0, 0.3)
    assert steps == 12
    assert dt <= 0.09
    assert steps * dt == pytest.approx(1.0)
    assert coupled_step(0.5, 0.5, 4.0) == (0.5, 1)


def test_constant_field_is_reproduced(torus_ops):
    ref = constant_field(1.0, 0.5)
    v = restrict(torus_ops.complex, ref)
    errors = error_norms(torus_ops, v, ref)
    assert errors['L2h'] == 0.0
    assert errors['whitney_L2'] < 1e-12
    assert whitney_l2_error(torus_ops, v, ref) < 1e-12


def test_whitney_needs_2d(prism_ops):
    ref = constant_field(1.0, 0.5, 0.25)
    with pytest.raises(ValidationError):
        whitney_l2_error(prism_ops, restrict(prism_ops.complex, ref), ref)


def test_truncation_of_uniform_flow_vanishes(torus):
    ref = constant_field(1.0, 0.5)
    ctx = flow_for_reference(torus, ref)
    assert truncation_error(ctx, ref) < 1e-12


@pytest.mark.slow
def test_truncation_decreases_on_equilateral_torus():
    table = truncation_study('torus:equilateral:8', taylor_green_2d(), [8, 12, 16, 24])
    errors = table.errors['truncation']
    assert table.family == 'B'
    assert all(b < a for a, b in zip(errors, errors[1:]))


def test_identity_suite_on_torus(torus):
    report = run_identity_suite(torus, trials=10, rng=np.random.default_rng(7))
    assert report['passed'], report['failed']
    assert report['trials'] == 10
    assert set(report['residuals']) == set(TOLERANCES)
    assert report['residuals']['chain_primal'] == 0.0


def test_polarised_identities_hold_at_scale():
    cx = build_mesh('torus:equilateral:16')
    report = run_identity_suite(cx, trials=200, rng=np.random.default_rng(7))
    residuals = report['residuals']
    assert residuals['polarised_three'] <= TOLERANCES['polarised_three']
    assert residuals['polarised_six'] <= TOLERANCES['polarised_six']
    assert 'polarised_three' not in report['failed']
    assert report['kelvin_loops'] == 200
    assert report['kelvin_velocities'] == 32


@pytest.mark.parametrize('name', ['square', 'prism'])
def test_identity_suite_structure(name, request):
    cx = request.getfixturevalue(name)
    report = run_identity_suite(cx, trials=3, rng=np.random.default_rng(7))
    residuals = report['residuals']
    assert residuals['chain_primal'] == 0.0
    assert residuals['chain_dual'] == 0.0
    assert residuals['energy_identity'] < 1e-12
    assert ('kelvin' in residuals) == cx.is_periodic


def test_identity_suite_gram_variant_skips_face_identities(perturbed_torus):
    report = run_identity_suite(perturbed_torus, trials=3, variant='gram')
    assert report['variant'] == 'gram'
    assert 'kelvin' not in report['residuals']
    assert 'lamb_wedge' not in report['residuals']
    assert report['residuals']['energy_identity'] < 1e-12



def _passed(table, norm):
    return table.summary()['norms'][norm]['passed']


@pytest.mark.slow
def test_hodge_rate_is_second_order_on_equilateral_torus():
    table = hodge_rate('torus:equilateral:8', [8, 16, 32, 64])
    assert table.family == 'B'
    assert set(table.norms) == {'k0', 'k1', 'k2'}
    for norm in table.norms:
        assert _passed(table, norm), norm


@pytest.mark.slow
def test_projection_rate_on_equilateral_torus():
    table = projection_rate('torus:equilateral:8', [8, 16, 32, 64])
    assert table.family == 'B'
    assert table.expectations['L2h'].target == 2.0
    fit = table.fit('L2h')
    assert fit is not None
    assert fit.slope >= 1.5


@pytest.mark.slow
def test_reconstruction_rate_separates_gram_and_linear():
    table = reconstruction_rate('torus:equilateral:8', [8, 16, 32, 64])
    assert table.expectations['gram'].target == 1.0
    assert table.expectations['linear'].target == 2.0
    gram, linear = table.fit('gram'), table.fit('linear')
    assert gram is not None and linear is not None
    assert linear.slope >= 1.5
    assert linear.slope > gram.slope + 0.5
    assert table.errors['linear'][-1] < table.errors['gram'][-1]


@pytest.mark.slow
def test_truncation_study_meets_the_case_b_minimum():
    table = truncation_study('torus:equilateral:8', taylor_green_2d(), [8, 12, 16, 24])
    assert table.expectations['truncation'].minimum == CASE_B_MINIMUM
    assert _passed(table, 'truncation')


@pytest.mark.slow
def test_truncation_study_family_a_is_first_order():
    table = truncation_study('torus:perturbed:8:0.15', taylor_green_2d(), [8, 12, 16, 24], seed=3)
    assert table.family == 'A'
    assert table.expectations['truncation'].target == 1.0
    fit = table.fit('truncation')
    assert fit is not None
    assert fit.slope >= 0.75


@pytest.mark.slow
def test_time_refinement_is_second_order():
    table, extras = rate_study('time', 'torus:equilateral:8', [], T=0.5)
    assert extras == {}
    assert table.label == 'time_refinement/mixture2d'
    assert len(table.resolutions) == 4
    assert _passed(table, 'trajectory')


@pytest.mark.slow
def test_pressure_study_decreases():
    table, extras = rate_study('pressure', 'torus:equilateral:8', [8, 12, 16, 24])
    assert extras['monotone']
    assert 'passed' not in table.summary()['norms']['pressure_L2']


@pytest.mark.slow
@pytest.mark.parametrize('study', ['leibniz', 'helicity'])
def test_prism_studies_use_a_non_beltrami_partner(study):
    table, _ = rate_study(study, 'prism:equilateral:4:2', [4, 6, 8, 10], T=0.0)
    norm = table.norms[0]
    assert all(e > 1e-8 for e in table.errors[norm])


def test_rate_study_rejects_unknown_names():
    with pytest.raises(ValidationError):
        rate_study('bogus', 'torus:equilateral:8', [8, 16])


@pytest.mark.slow
@pytest.mark.parametrize('mesh, letter', [('torus:equilateral:8', 'B'), ('torus:perturbed:8:0.15', 'A')])
def test_nu_spread_is_checked_on_case_b_only(mesh, letter):
    study = nu_uniformity_study('tg2d', mesh, [8, 10, 12, 14], 0.02, nus=(0.0, 1e-2), seed=3)
    assert {table.family for table in study['tables'].values()} == {letter}
    assert study['spread_checked'] is (letter == 'B')
    spread = study['spread']
    if spread is None:
        assert study['passed'] is False
    elif letter == 'B':
        assert study['passed'] == (spread <= 0.15)
    else:
        assert study['passed'] == all(t.summary()['norms']['L2h']['passed'] for t in study['tables'].values())

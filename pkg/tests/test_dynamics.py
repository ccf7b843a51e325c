import numpy as np
import pytest

from dec_core import read_cochain
from dynamics import (
    FlowState, STEPPERS, ViscositySpec, build_flow, diagnose, dissipation, energy, energy_equality_residual,
    integrate, integrate_steps, kelvin_residual, step_count, step_forward_euler, time_reverse_check,
)
from leray_pressure import divergence_residual, leray_project
from mesh_complex import ConfigError, ValidationError, homology_basis, random_dual_cycles
from verification import initial_velocity, smooth_mixture_2d, taylor_green_2d


@pytest.fixture
def solenoidal(rng):
    def draw(flow, scale=0.5):
        v = leray_project(flow.leray, flow.leray.mask(rng.standard_normal(flow.complex.n_dual[1])))
        return scale * v / np.abs(v).max()
    return draw


def test_midpoint_conserves_energy(perturbed_flow, solenoidal):
    v0 = solenoidal(perturbed_flow)
    state = integrate_steps(perturbed_flow, FlowState(time=0.0, velocity=v0), 0.01, 5, tol=1e-13)
    e0, e1 = energy(perturbed_flow, v0), energy(perturbed_flow, state.velocity)
    assert state.steps == 5
    assert state.time == pytest.approx(0.05)
    assert abs(e1 - e0) < 1e-10 * e0
    assert divergence_residual(perturbed_flow.leray, state.velocity) < 1e-10


def test_midpoint_on_no_slip_square(square_flow, solenoidal):
    v0 = solenoidal(square_flow)
    state = integrate_steps(square_flow, FlowState(time=0.0, velocity=v0), 0.01, 3, tol=1e-13)
    assert abs(energy(square_flow, state.velocity) - energy(square_flow, v0)) < 1e-10 * energy(square_flow, v0)
    assert np.all(state.velocity[~square_flow.leray.interior_mask] == 0.0)


def test_time_reversal_returns_to_start(torus_flow, solenoidal):
    error, state = time_reverse_check(torus_flow, solenoidal(torus_flow), 0.04, 0.01, tol=1e-13)
    assert error < 1e-9
    assert state.steps == 8


def test_time_reversal_needs_inviscid_flow(viscous_torus_flow, solenoidal):
    with pytest.raises(ValidationError):
        time_reverse_check(viscous_torus_flow, solenoidal(viscous_torus_flow), 0.02, 0.01)


def test_kelvin_identity_for_face_extrusion(torus_flow, solenoidal, rng):
    v = solenoidal(torus_flow)
    for gamma in random_dual_cycles(torus_flow.complex, rng, count=4):
        assert kelvin_residual(torus_flow, v, gamma) < 1e-10


def test_viscous_energy_decay(viscous_torus_flow, solenoidal):
    ctx = viscous_torus_flow
    v = solenoidal(ctx)
    energies = [energy(ctx, v)]
    state = FlowState(time=0.0, velocity=v)
    for _ in range(4):
        previous = state
        state = integrate_steps(ctx, state, 0.01, 1, tol=1e-13)
        energies.append(energy(ctx, state.velocity))
        assert energy_equality_residual(ctx, previous.velocity, state.velocity, 0.01) < 1e-10
    assert np.all(np.diff(energies) < 0.0)
    assert dissipation(ctx.ops, ctx.viscosity, v) < 0.0


def test_smagorinsky_flow_dissipates(torus, torus_ops, solenoidal):
    ctx = build_flow(torus, viscosity=ViscositySpec.smagorinsky_model(0.17), ops=torus_ops)
    v = solenoidal(ctx)
    state = integrate_steps(ctx, FlowState(time=0.0, velocity=v), 0.01, 2, tol=1e-13)
    assert energy(ctx, state.velocity) <= energy(ctx, v)


def test_forward_euler_runs(torus_flow, solenoidal):
    v = solenoidal(torus_flow)
    state = step_forward_euler(torus_flow, FlowState(time=0.0, velocity=v), 0.01)
    assert state.steps == 1
    assert state.time == pytest.approx(0.01)
    assert np.all(np.isfinite(state.velocity))
    assert set(STEPPERS) == {'midpoint', 'forward_euler'}


def test_forward_euler_breaks_time_reversal(torus_flow):
    v0 = 2.0 * initial_velocity(torus_flow, smooth_mixture_2d())
    midpoint_error, _ = time_reverse_check(torus_flow, v0, 0.5, 0.01, tol=1e-13)
    euler_error, _ = time_reverse_check(torus_flow, v0, 0.5, 0.01, stepper='forward_euler')
    assert midpoint_error <= 1e-8
    assert euler_error >= 1e-3


def test_step_count():
    assert step_count(1.0, 0.1) == 10
    assert step_count(0.0, 0.1) == 0
    with pytest.raises(ValidationError):
        step_count(1.0, 0.3)
    with pytest.raises(ValidationError):
        step_count(1.0, 0.0)


def test_midpoint_rejects_bad_inputs(torus_flow, solenoidal):
    state = FlowState(time=0.0, velocity=solenoidal(torus_flow))
    with pytest.raises(ValidationError):
        STEPPERS['midpoint'](torus_flow, state, -0.1)
    with pytest.raises(ValidationError):
        STEPPERS['midpoint'](torus_flow, state, 0.01, tol=1e-16)


def test_viscosity_spec_parse():
    assert ViscositySpec.parse('none').inviscid
    assert ViscositySpec.parse('0').inviscid
    assert ViscositySpec.parse('0.01') == ViscositySpec.isotropic(0.01)
    assert ViscositySpec.parse('isotropic:0.02').nu == 0.02
    aniso = ViscositySpec.parse('anisotropic:0.01:0.001')
    assert (aniso.nu_h, aniso.nu_v) == (0.01, 0.001)
    assert ViscositySpec.parse('smagorinsky:0.17').smagorinsky == 0.17
    assert ViscositySpec.parse('isotropic:0.02').describe() == 'isotropic:0.02'
    for text in ('isotropic', 'laminar:1', 'isotropic:abc', '-0.1'):
        with pytest.raises(ConfigError) as info:
            ViscositySpec.parse(text)
        assert info.value.field == 'problem.viscosity'


def test_anisotropic_viscosity_needs_3d(torus, torus_ops):
    with pytest.raises(ValidationError):
        build_flow(torus, viscosity=ViscositySpec.anisotropic(0.01, 0.001), ops=torus_ops)


def test_anisotropic_viscosity_on_prism(prism, prism_ops, solenoidal):
    ctx = build_flow(prism, viscosity=ViscositySpec.anisotropic(0.01, 0.001), ops=prism_ops)
    assert dissipation(ctx.ops, ctx.viscosity, solenoidal(ctx)) <= 0.0


def test_diagnose_prism_reports_helicity(prism_flow, solenoidal):
    record = diagnose(prism_flow, FlowState(time=0.0, velocity=solenoidal(prism_flow)))
    assert record.helicity is not None
    assert record.helicity_rate is not None
    assert len(record.harmonic_components) == 3
    assert record.energy_equality_residual is None


def test_integrate_runner(torus_flow, tmp_path):
    ref = taylor_green_2d()
    v0 = initial_velocity(torus_flow, ref)
    loops = np.vstack(homology_basis(torus_flow.complex))
    report = integrate(torus_flow, v0, 0.03, 0.01, {'mesh': 'torus:equilateral:8'}, tol=1e-13,
                       cadence=2, loops=loops, checkpoint_dir=tmp_path)

    assert [r.time for r in report.series] == pytest.approx([0.0, 0.02, 0.03])
    summary = report.summary
    assert summary['steps'] == 3
    assert summary['energy_drift_max'] < 1e-10
    assert summary['circulation_drift_max'] < 1e-9
    assert summary['max_divergence'] < 1e-10
    assert len(report.series[0].harmonic_components) == 2
    assert report.to_dict()['config'] == {'mesh': 'torus:equilateral:8'}

    assert report.checkpoints == ['velocity_000000.cochain', 'velocity_000002.cochain',
                                  'velocity_000003.cochain']
    cochain, time, label = read_cochain(tmp_path / report.checkpoints[-1], torus_flow.complex)
    assert time == pytest.approx(0.03)
    assert cochain.degree == 1
    assert label == "velocity step 3"
    rerun = integrate_steps(torus_flow, FlowState(time=0.0, velocity=v0), 0.01, 3, tol=1e-13)
    assert np.array_equal(cochain.values, rerun.velocity)


def test_integrate_unsteady_flow_keeps_energy(torus_flow):
    v0 = initial_velocity(torus_flow, smooth_mixture_2d())
    loops = np.vstack(homology_basis(torus_flow.complex))
    report = integrate(torus_flow, v0, 0.2, 0.01, {}, tol=1e-13, cadence=5, loops=loops)
    summary = report.summary
    assert summary['energy_drift_max'] < 1e-10
    assert summary['circulation_drift_max'] < 1e-8
    assert summary['kelvin_residual_max'] < 1e-10
    final = integrate_steps(torus_flow, FlowState(time=0.0, velocity=v0), 0.01, 20, tol=1e-13).velocity
    # the field really moves
    assert np.abs(final - v0).max() > 1e-3 * np.abs(v0).max()


def test_viscous_summary_omits_kelvin(viscous_torus_flow, solenoidal):
    loops = np.vstack(homology_basis(viscous_torus_flow.complex))
    report = integrate(viscous_torus_flow, solenoidal(viscous_torus_flow), 0.02, 0.01, {}, tol=1e-13, loops=loops)
    assert 'circulation_drift_max' in report.summary
    assert 'kelvin_residual_max' not in report.summary
    assert all(r.kelvin_residuals == [] for r in report.series)

import json

import pytest
from scipy.io import mmread

from cli import build_config, read_config_file, read_csv, run, write_csv
from mesh_complex import ConfigError, ValidationError

MESH = 'torus:equilateral:8'


def _run(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_mesh_audit_writes_summary(tmp_path, capsys):
    code, out, _ = _run(capsys, 'mesh-audit', '--mesh', MESH, '--output-dir', str(tmp_path))
    assert code == 0
    document = json.loads((tmp_path / 'mesh-audit.json').read_text())
    assert document['schema_version'] == 1
    assert document['config']['mesh'] == MESH
    assert document['config']['subcommand'] == 'mesh-audit'
    results = document['results']
    assert results['complex']['primal_counts'] == [64, 192, 128]
    assert results['complex']['euler_characteristic'] == 0
    assert (tmp_path / results['mesh_file']).is_file()
    assert json.loads(out) == results


@pytest.mark.parametrize('argv', [
    ['mesh-audit', '--bogus'],
    ['mesh-audit', '--mesh', 'torus:equilateral'],
    ['mesh-audit', '--mesh', 'torus:equilateral:3'],
    ['integrate', '--mesh', MESH, '--viscosity', 'laminar'],
    ['integrate', '--mesh', MESH, '--T', '0.1', '--dt', '0.5'],
    ['invariants', '--trials', '0'],
    ['mesh-audit', '--config', 'does-not-exist.env'],
    ['frobnicate'],
])
def test_validation_failures_exit_one(argv, tmp_path, capsys):
    code, out, err = _run(capsys, *argv, '--output-dir', str(tmp_path))
    assert code == 1
    assert out == ''
    report = json.loads(err.strip().splitlines()[-1])
    assert set(report) >= {'error', 'module', 'message'}


def test_bad_viscosity_names_field(tmp_path, capsys):
    _, _, err = _run(capsys, 'integrate', '--mesh', MESH, '--viscosity', 'laminar', '--output-dir', str(tmp_path))
    report = json.loads(err.strip().splitlines()[-1])
    assert report == {'error': 'ConfigError', 'module': 'cli', 'field': 'problem.viscosity',
                      'message': report['message']}


def test_config_file_and_overrides(tmp_path):
    path = tmp_path / 'experiment.env'
    path.write_text("# torus run\nmesh.spec=torus:equilateral:12\nseed=5\nintegration.T=0.5\n")
    values = read_config_file(path)
    config = build_config('integrate', values, {'mesh.spec': MESH, 'seed': None})
    assert config.mesh == MESH
    assert config.seed == 5
    assert config.T == 0.5
    assert config.viscosity_spec.inviscid


def test_config_file_rejects_unknown_key(tmp_path, capsys):
    path = tmp_path / 'experiment.env'
    path.write_text("mesh.colour=red\n")
    with pytest.raises(ConfigError) as info:
        build_config('mesh-audit', read_config_file(path))
    assert info.value.field == 'mesh.colour'
    code, _, _ = _run(capsys, 'mesh-audit', '--config', str(path), '--output-dir', str(tmp_path))
    assert code == 1


def test_build_config_parsing():
    config = build_config('converge', {}, {'mesh.resolutions': '8,16,32,64', 'problem.viscosity': 'isotropic:0.01',
                                          'mesh.family': 'A'})
    assert config.resolutions == (8, 16, 32, 64)
    assert config.reference_nu == 0.01
    assert config.to_dict()['resolutions'] == [8, 16, 32, 64]
    with pytest.raises(ConfigError) as info:
        build_config('converge', {}, {'mesh.family': 'C'})
    assert info.value.field == 'mesh.family'
    with pytest.raises(ConfigError) as info:
        build_config('converge', {}, {'mesh.kind': 'prism', 'mesh.family': 'B'})
    assert info.value.field == 'mesh.layers'


def test_invariants_rerun_is_byte_identical(tmp_path, capsys):
    argv = ['invariants', '--mesh', MESH, '--trials', '2', '--seed', '3', '--output-dir', str(tmp_path)]
    assert _run(capsys, *argv)[0] == 0
    first = (tmp_path / 'invariants.json').read_bytes()
    assert _run(capsys, *argv)[0] == 0
    assert (tmp_path / 'invariants.json').read_bytes() == first
    results = json.loads(first)['results']
    assert results['trials'] == 2
    assert results['variant'] == 'face'


def test_integrate_writes_series(tmp_path, capsys):
    code, out, _ = _run(capsys, 'integrate', '--mesh', MESH, '--T', '0.02', '--dt', '0.01',
                        '--checkpoints', '--output-dir', str(tmp_path))
    assert code == 0
    results = json.loads(out)
    assert results['summary']['steps'] == 2
    assert results['summary']['energy_drift_max'] < 1e-10
    assert len(results['checkpoints']) == 3
    table = read_csv(tmp_path / 'integrate.csv')
    assert table['schema_version'] == 1
    assert table['config']['T'] == 0.02
    assert len(table['rows']) == 3
    assert {'time', 'energy', 'max_divergence', 'circulations_0', 'circulations_1'} <= set(table['header'])


def test_export_operators(tmp_path, capsys):
    code, out, _ = _run(capsys, 'export-operators', '--mesh', MESH, '--output-dir', str(tmp_path))
    assert code == 0
    results = json.loads(out)
    index = json.loads((tmp_path / results['index']).read_text())
    assert index['matrices']['D0'] == {'file': 'D0.mtx', 'shape': [192, 64], 'nnz': 384}
    D0 = mmread(str(tmp_path / 'operators' / 'D0.mtx'))
    assert D0.shape == (192, 64)


def test_csv_round_trip(tmp_path):
    config = build_config('integrate', {}, {'integration.T': '0.5'})
    rows = [{'n': 8, 'error': 0.1, 'passed': True, 'note': None},
            {'n': 16, 'error': 0.025, 'passed': False, 'note': 'x'}]
    path = write_csv(tmp_path / 'table.csv', config, rows)
    assert path.read_text().splitlines()[0] == f"# schema_version=1 config={config.to_json()}"
    table = read_csv(path)
    assert table['header'] == ['n', 'error', 'passed', 'note']
    assert table['rows'][0] == {'n': '8', 'error': '0.10000000000000001', 'passed': 'true', 'note': ''}
    assert table['config'] == config.to_dict()


def test_read_csv_needs_schema_line(tmp_path):
    path = tmp_path / 'plain.csv'
    path.write_text("a,b\n1,2\n")
    with pytest.raises(ValidationError):
        read_csv(path)


def test_rates_writes_table(tmp_path, capsys):
    code, out, _ = _run(capsys, 'rates', '--study', 'whitney', '--mesh', MESH, '--resolutions', '8,10,12,14',
                        '--output-dir', str(tmp_path))
    assert code == 0
    results = json.loads(out)
    assert results['study'] == 'whitney'
    assert results['table']['resolutions'] == [8, 10, 12, 14]
    table = read_csv(tmp_path / 'rates.csv')
    assert table['config']['study'] == 'whitney'
    assert [row['norm'] for row in table['rows']] == ['whitney_L2'] * 4


@pytest.mark.slow
def test_rates_hodge_passes_on_equilateral_ladder(tmp_path, capsys):
    code, out, _ = _run(capsys, 'rates', '--study', 'hodge', '--mesh', MESH, '--resolutions', '8,16,32,64',
                        '--output-dir', str(tmp_path))
    assert code == 0
    norms = json.loads(out)['table']['norms']
    assert all(entry['passed'] for entry in norms.values())


@pytest.mark.parametrize('argv', [
    ['rates', '--study', 'bogus'],
    ['rates', '--study', 'hodge', '--mesh', 'prism:equilateral:4:2', '--problem', 'tg2d'],
    ['rates', '--study', 'time', '--dts', '0.1,x'],
])
def test_rates_validation_failures(argv, tmp_path, capsys):
    code, out, err = _run(capsys, *argv, '--output-dir', str(tmp_path))
    assert code == 1
    assert out == ''
    assert json.loads(err.strip().splitlines()[-1])['error'] == 'ConfigError'


def test_reference_defaults_to_taylor_green():
    config = build_config('rates', {}, {'rates.study': 'time', 'integration.dts': '0.1,0.05'})
    assert config.reference is None
    assert config.reference_name == 'tg2d'
    assert config.dts == (0.1, 0.05)
    assert config.to_dict()['dts'] == [0.1, 0.05]

import inspect

import setup


def test_every_step_is_documented():
    steps = [obj for _, obj in inspect.getmembers(setup, inspect.isfunction) if obj.__module__ == 'setup']
    assert {step.__name__ for step in steps} >= {'create_directories', 'create_env_file', 'check_packages'}
    assert all(inspect.getdoc(step) for step in steps)


def test_create_env_file_keeps_existing(tmp_path, monkeypatch, capsys):
    monkeypatch.chdir(tmp_path)
    setup.create_env_file()
    written = (tmp_path / '.env').read_text()
    assert 'DECFLOW_MIDPOINT_TOL=1e-13' in written
    (tmp_path / '.env').write_text('DECFLOW_LOG_LEVEL=DEBUG\n')
    setup.create_env_file()
    assert (tmp_path / '.env').read_text() == 'DECFLOW_LOG_LEVEL=DEBUG\n'
    assert '[OK] .env file already exists' in capsys.readouterr().out

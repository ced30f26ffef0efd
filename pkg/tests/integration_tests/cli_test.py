import os

import pandas as pd
import pytest
import yaml

from LagrangianGP import cli_module
from LagrangianGP.cli_module import main, EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL
from LagrangianGP.compute.exceptions import NumericalError


def _out(tmp_path, name='out'):
    return '--set=experiment.output_dir={}'.format(tmp_path / name)


def test_fill_distance_is_deterministic(tmp_path):
    args = ['fill-distance', '--set', 'experiment.kind=fill_distance', '--set', 'evaluation.fill_max_M=16',
            '--set', 'evaluation.probe_resolution=20']
    assert main(args + [_out(tmp_path, 'a')]) == EXIT_OK
    assert main(args + [_out(tmp_path, 'b')]) == EXIT_OK
    first = (tmp_path / 'a' / 'fill_distance.csv').read_bytes()
    assert first == (tmp_path / 'b' / 'fill_distance.csv').read_bytes()
    assert len(pd.read_csv(tmp_path / 'a' / 'fill_distance.csv')) == 4 + 3
    assert os.path.exists(tmp_path / 'a' / 'config.yml')


def test_unknown_config_key(tmp_path):
    assert main(['train', '--set', 'training.nope=1', _out(tmp_path)]) == EXIT_CONFIG


def test_bad_config_file(tmp_path):
    path = tmp_path / 'config.yml'
    path.write_text('training:\n  M: many\n')
    assert main(['train', '--config', str(path), _out(tmp_path)]) == EXIT_CONFIG


def test_missing_model(tmp_path):
    assert main(['uq-grid', _out(tmp_path)]) == EXIT_CONFIG
    assert main(['trajectory', '--model', str(tmp_path / 'none.npz'), _out(tmp_path)]) == EXIT_CONFIG


def test_wrong_experiment_for_command(tmp_path):
    assert main(['convergence', _out(tmp_path)]) == EXIT_CONFIG
    assert main(['train', '--set', 'experiment.kind=fill_distance', _out(tmp_path)]) == EXIT_CONFIG


def test_numerical_failure(tmp_path, monkeypatch):
    def failing(*args, **kwargs):
        raise NumericalError("singular")
    monkeypatch.setattr(cli_module, 'run_experiment', failing)
    assert main(['train', _out(tmp_path)]) == EXIT_NUMERICAL


def test_dump_config(capsys):
    assert main(['train', '--dump-config', '--set', 'training.M=7']) == EXIT_OK
    dumped = yaml.safe_load(capsys.readouterr().out)
    assert dumped['training']['M'] == 7
    assert dumped['kernel']['family'] == 'squared_exponential'


def test_unknown_command():
    with pytest.raises(SystemExit):
        main(['plot'])


def test_continuous_workflow(tmp_path):
    common = ['--set', 'training.M=10', _out(tmp_path)]
    assert main(['train'] + common) == EXIT_OK
    out = tmp_path / 'out'
    report = yaml.safe_load((out / 'train_report.yml').read_text())
    assert report['kind'] == 'continuous'
    assert report['n_constraints'] == 24
    assert report['max_constraint_residual'] < 1e-8
    assert report['spectrum']['method'] == 'eigh'

    assert main(['uq-grid', '--set', 'evaluation.grid=5'] + common) == EXIT_OK
    grid = pd.read_csv(out / 'uq_grid_EL_position.csv')
    assert len(grid) == 25
    assert list(grid.columns) == ['u', 'v', 'variance_1', 'variance_2', 'variance']

    assert main(['uq-grid', '--set', 'evaluation.grid=5', '--set', 'evaluation.observable=Mm',
                 '--set', 'evaluation.slice=velocity'] + common) == EXIT_OK
    assert len(pd.read_csv(out / 'uq_grid_Mm_velocity.csv').columns) == 6

    assert main(['trajectory', '--set', 'dynamics.horizon=1.0', '--set', 'dynamics.dt=0.1'] + common) == EXIT_OK
    trajectory = pd.read_csv(out / 'trajectory.csv')
    assert len(trajectory) == 11
    assert list(trajectory.columns) == ['t', 'x1', 'x2', 'v1', 'v2']
    diagnostics = pd.read_csv(out / 'trajectory_diagnostics.csv')
    assert list(diagnostics.columns) == ['t', 'el_variance', 'hamiltonian', 'ham_drift', 'error']
    assert diagnostics['error'][0] == 0.0

    assert main(['observe'] + common) == EXIT_OK
    assert len(pd.read_csv(out / 'observations.csv')) == 10


def test_discrete_workflow(tmp_path):
    common = ['--set', 'experiment.kind=discrete_oscillator', '--set', 'training.M=20',
              '--set', 'solver.range_tol=1.0e-5', _out(tmp_path)]
    assert main(['train'] + common) == EXIT_OK
    out = tmp_path / 'out'
    assert yaml.safe_load((out / 'train_report.yml').read_text())['kind'] == 'discrete'

    assert main(['trajectory', '--set', 'dynamics.steps=5'] + common) == EXIT_OK
    trajectory = pd.read_csv(out / 'trajectory.csv')
    assert len(trajectory) == 7
    assert list(trajectory.columns) == ['k', 'x1', 'x2']
    assert len(pd.read_csv(out / 'reference_trajectory.csv')) == 7

    assert main(['observe'] + common) == EXIT_OK
    assert list(pd.read_csv(out / 'observations.csv').columns)[:2] == ['x0_1', 'x0_2']


def test_train_from_stored_observations(tmp_path):
    assert main(['observe', '--set', 'training.M=10', _out(tmp_path)]) == EXIT_OK
    stored = 'training.observations={}'.format(tmp_path / 'out' / 'observations.csv')
    assert main(['train', '--set', 'training.M=3', '--set', stored, _out(tmp_path, 'trained')]) == EXIT_OK
    report = yaml.safe_load((tmp_path / 'trained' / 'train_report.yml').read_text())
    assert report['M'] == 10
    assert report['n_constraints'] == 24
    assert main(['train', '--set', 'experiment.kind=discrete_oscillator', '--set', stored,
                 _out(tmp_path, 'wrong')]) == EXIT_CONFIG


def test_convergence_command(tmp_path):
    assert main(['convergence', '--set', 'experiment.kind=convergence_1d', '--set', 'evaluation.M_list=[2, 4]',
                 '--set', 'training.p_b=[0.0]', _out(tmp_path)]) == EXIT_OK
    frame = pd.read_csv(tmp_path / 'out' / 'convergence.csv')
    assert list(frame['M']) == [2, 4]
    assert list(frame['n_degenerate']) == [0, 0]

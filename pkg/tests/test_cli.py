import importlib
import json

import numpy as np
import pandas as pd
import pytest

from driftflow.cli import (
    ExperimentConfig,
    list_presets,
    load_config,
    main,
    parse_config_text,
    reproduce,
    run,
    sweep,
)
from driftflow.cli.config import EXIT_CONFIG, EXIT_FAIL, EXIT_PASS, PRESETS
from driftflow.common.errors import ConfigError, Nonfinite, UnknownPreset


def _config(tmp_path, **kwargs):
    kwargs.setdefault('out', str(tmp_path / 'run'))
    return ExperimentConfig(**kwargs)


def test_run_writes_trace_and_summary(tmp_path):
    report = run(_config(tmp_path, optimizer='gd', h=0.5, n_iters=10))
    assert report.summary['n_rows'] == 11
    assert report.summary['final_loss'] == pytest.approx(0.5 * 0.25**10)
    assert report.trace_path.name == 'trace.csv'
    df = pd.read_csv(report.trace_path)
    assert len(df) == 11
    assert {'iter', 'loss', '|g|', 'lr'} <= set(df.columns)
    saved = json.loads(report.summary_path.read_text(encoding='utf-8'))
    assert saved['config']['optimizer.h'] == 0.5
    assert saved['summary']['n_rows'] == 11


def test_run_json_trace(tmp_path):
    report = run(_config(tmp_path, h=0.5, n_iters=4, output_format='json'))
    assert report.trace_path.name == 'trace.json'
    records = json.loads(report.trace_path.read_text(encoding='utf-8'))
    assert len(records) == 5
    assert records[0]['loss'] == pytest.approx(0.5)


def test_run_measures_drift(tmp_path):
    config = _config(tmp_path, h=0.5, n_iters=5, flows=('ngf', 'pf'), substep=1e-3)
    report = run(config)
    assert set(report.summary['drift']) == {'ngf', 'pf:0.5'}
    df = pd.read_csv(report.trace_path)
    assert 'drift[ngf]' in df.columns
    # the principal flow reproduces gradient descent on a quadratic
    assert df['drift[pf:0.5]'].iloc[1:].abs().max() < 1e-8


def test_run_records_eigenvalues(tmp_path):
    config = _config(
        tmp_path,
        problem_params={'eigenvalues': [1.0, 3.0]},
        h=0.1,
        n_iters=5,
        record_eigs=True,
    )
    report = run(config)
    assert report.summary['lambda0']['first'] == pytest.approx(3.0)
    assert report.summary['lambda0']['first_crossing_of_2_over_h'] is None


def test_run_game(tmp_path):
    config = _config(
        tmp_path, problem='lineargame', optimizer='sim', h=0.1, n_iters=20, theta0=(1.0, 1.0)
    )
    report = run(config)
    assert report.summary['radius_increased_steps'] == 20
    assert report.summary['final_radius'] > report.summary['initial_radius']


def test_run_rejects_mismatched_rule(tmp_path):
    with pytest.raises(ConfigError):
        run(_config(tmp_path, problem='lineargame', optimizer='gd'))
    with pytest.raises(ConfigError):
        run(_config(tmp_path, problem='quadratic', optimizer='alt'))
    with pytest.raises(ConfigError):
        run(_config(tmp_path, problem='quadratic', theta0=(1.0, 2.0)))
    with pytest.raises(ConfigError):
        run(_config(tmp_path, problem='rosenbrock'))


def test_run_diverges(tmp_path):
    with pytest.raises(Nonfinite):
        run(_config(tmp_path, h=3.0, n_iters=2000))


def test_run_is_deterministic(tmp_path):
    params = {'eigenvalues': [1.0, 3.0, 5.0], 'seed': 4}
    first, second = (
        run(_config(tmp_path, problem_params=params, h=0.1, n_iters=20, out=str(tmp_path / name)))
        for name in 'ab'
    )
    assert first.trace_path.read_text() == second.trace_path.read_text()


@pytest.mark.parametrize(
    'kwargs',
    [dict(optimizer='adam'), dict(h=0.0), dict(n_iters=-1), dict(output_format='xml')],
)
def test_config_validation(kwargs):
    with pytest.raises(ConfigError):
        ExperimentConfig(**kwargs)


def test_from_flat():
    config = ExperimentConfig.from_flat(
        {
            'problem.id': 'lineargame',
            'problem.eps1': 0.09,
            'optimizer.rule': 'alt',
            'optimizer.h': '0.2',
            'run.n_iters': 50,
            'flows': 'ngf, igr',
        }
    )
    assert config.problem == 'lineargame'
    assert config.problem_params == {'eps1': 0.09}
    assert config.h == 0.2
    assert config.flows == ('ngf', 'igr')
    assert ExperimentConfig.from_flat(config.to_flat()) == config


def test_from_flat_rejects_keys_and_values():
    with pytest.raises(ConfigError):
        ExperimentConfig.from_flat({'optimiser.h': 0.1})
    with pytest.raises(ConfigError):
        ExperimentConfig.from_flat({'optimizer.h': 'fast'})


def test_parse_config_text():
    text = '# quadratic\noptimizer.h = 0.5  # lr\n\nrun.n_iters = 10\nflows = ngf,pf\n'
    assert parse_config_text(text) == {'optimizer.h': 0.5, 'run.n_iters': 10, 'flows': 'ngf,pf'}
    with pytest.raises(ConfigError):
        parse_config_text('optimizer.h 0.5')


def test_load_config(tmp_path):
    path = tmp_path / 'quad.cfg'
    path.write_text('problem.id = banana\noptimizer.h = 0.001\n', encoding='utf-8')
    config = load_config(path)
    assert config.problem == 'banana'
    assert config.h == 0.001
    with pytest.raises(ConfigError):
        load_config(tmp_path / 'missing.cfg')


def test_sweep(tmp_path):
    config = _config(tmp_path, h=0.1, n_iters=5)
    reports = sweep(config, 'optimizer.h', [0.1, 0.5], progress=False)
    assert list(reports) == ['optimizer.h=0.1', 'optimizer.h=0.5']
    for label, report in reports.items():
        assert report.trace_path.parent == tmp_path / 'run' / label
        assert report.summary['n_rows'] == 6
    final = {label: r.summary['final_loss'] for label, r in reports.items()}
    assert final['optimizer.h=0.5'] < final['optimizer.h=0.1']


def test_sweep_return_df(tmp_path):
    config = _config(tmp_path, h=0.1, n_iters=5)
    df = sweep(config, 'optimizer.h', [0.1, 0.5], progress=False, return_df=True)
    assert df['run'].tolist() == ['optimizer.h=0.1', 'optimizer.h=0.5']
    assert df['optimizer.h'].tolist() == [0.1, 0.5]
    assert df['n_rows'].eq(6).all()


def test_sweep_keeps_going_after_divergence(tmp_path):
    config = _config(tmp_path, n_iters=2000)
    reports = sweep(config, 'optimizer.h', [0.5, 3.0], progress=False)
    assert 'error' not in reports['optimizer.h=0.5'].summary
    assert 'error' in reports['optimizer.h=3.0'].summary


def test_sweep_reports_unexpected_errors(tmp_path, monkeypatch):
    module = importlib.import_module('driftflow.cli.sweep')
    real_run = module.run

    def flaky_run(cfg):
        if cfg.h == 0.5:
            raise np.linalg.LinAlgError('singular matrix')
        return real_run(cfg)

    monkeypatch.setattr(module, 'run', flaky_run)
    reports = sweep(_config(tmp_path, n_iters=5), 'optimizer.h', [0.1, 0.5], progress=False)
    assert reports['optimizer.h=0.5'].summary == {'error': 'LinAlgError: singular matrix'}
    assert reports['optimizer.h=0.1'].summary['n_rows'] == 6


def test_sweep_rejects_unknown_key(tmp_path):
    with pytest.raises(ConfigError):
        sweep(_config(tmp_path), 'optimizer.eta', [0.1], progress=False)


def test_list_presets():
    presets = list_presets()
    assert list(presets) == list(PRESETS)
    assert all(presets.values())


def test_reproduce_unknown_preset(tmp_path):
    with pytest.raises(UnknownPreset):
        reproduce('mnist', out=tmp_path)


def test_edge_of_stability_learning_rate_sits_above_initial_sharpness(tmp_path):
    report = reproduce('edge-of-stability', out=tmp_path, n_iters=3)
    summary = report.summary
    assert summary['h'] == pytest.approx(2 / (1.01 * summary['lambda0_first']), rel=1e-8)
    assert summary['two_over_h'] == pytest.approx(1.01 * summary['lambda0_first'], rel=1e-8)


def test_main_list():
    assert main(['list']) == EXIT_PASS


def test_main_run(tmp_path):
    out = tmp_path / 'cli'
    code = main(['run', '--set', 'optimizer.h=0.5', '--set', 'run.n_iters=10', '--out', str(out)])
    assert code == EXIT_PASS
    assert len(pd.read_csv(out / 'trace.csv')) == 11


def test_main_run_from_config_file(tmp_path):
    path = tmp_path / 'run.cfg'
    path.write_text('optimizer.h = 0.25\nrun.n_iters = 3\n', encoding='utf-8')
    out = tmp_path / 'cli'
    assert main(['run', '--config', str(path), '--out', str(out), '--format', 'json']) == EXIT_PASS
    assert len(json.loads((out / 'trace.json').read_text(encoding='utf-8'))) == 4


@pytest.mark.parametrize(
    'argv',
    [
        ['run', '--set', 'optimizer.rule=adam'],
        ['run', '--config', 'does-not-exist.cfg'],
        ['reproduce', 'mnist'],
    ],
)
def test_main_configuration_errors(argv):
    assert main(argv) == EXIT_CONFIG


def test_main_divergence(tmp_path):
    argv = ['run', '--set', 'optimizer.h=3', '--set', 'run.n_iters=2000', '--out', str(tmp_path)]
    assert main(argv) == EXIT_FAIL


def test_main_sweep(tmp_path):
    argv = ['sweep', '--key', 'optimizer.h', '--values', '0.1,0.2', '--out', str(tmp_path)]
    assert main(argv) == EXIT_PASS
    assert (tmp_path / 'optimizer.h=0.2' / 'summary.json').is_file()


def test_main_requires_command():
    with pytest.raises(SystemExit):
        main([])


def test_trace_values_are_finite(tmp_path):
    report = run(_config(tmp_path, problem='banana', h=1e-3, n_iters=50))
    df = pd.read_csv(report.trace_path)
    assert np.isfinite(df['loss']).all()
    assert df['loss'].iloc[-1] < df['loss'].iloc[0]

import json

import pytest

from driftflow.cli import reproduce
from driftflow.cli.config import PRESETS

pytestmark = pytest.mark.slow


@pytest.mark.parametrize('name', PRESETS)
def test_preset_passes(tmp_path, name):
    report = reproduce(name, out=tmp_path / name)
    failed = [f'{c.name}: {c.detail}' for c in report.checks if not c.passed]
    assert report.checks
    assert not failed
    saved = json.loads(report.summary_path.read_text(encoding='utf-8'))
    assert saved['summary']['passed'] is True
    assert saved['config']['preset'] == name
    assert report.trace_path.is_file()


def test_preset_json_traces(tmp_path):
    report = reproduce('gc', out=tmp_path, output_format='json', n_seeds=3)
    assert report.trace_path.suffix == '.json'
    assert isinstance(json.loads(report.trace_path.read_text(encoding='utf-8')), list)


def test_preset_is_deterministic(tmp_path):
    first = reproduce('quadratic-exact', out=tmp_path / 'a', seed=5)
    second = reproduce('quadratic-exact', out=tmp_path / 'b', seed=5)
    assert first.trace_path.read_text() == second.trace_path.read_text()
    assert first.summary == second.summary

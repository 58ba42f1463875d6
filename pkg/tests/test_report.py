import json

import pandas as pd

from pragmatic.bandit import sweep
from pragmatic.report import RunReport, render_frame, sweep_frame
from pragmatic.utils import OutputFormat


def make_report():
    report = RunReport('ensemble')
    report.add_quantity('Phi', 0.75, 'pragmatic information')
    report.add_flag('definitive', False)
    report.add_check('decomposition', 1e-17, 1e-10, 'Phi - I - D')
    return report


def test_ok():
    report = make_report()
    assert report.ok
    assert report['Phi'] == 0.75
    report.add_check('upper_bound', 0.5, 1e-12)
    assert not report.ok
    assert report.failures == ['upper_bound']


def test_explicit_pass():
    report = RunReport('ensemble')
    report.add_check('upper_bound', -0.5, 1e-12, passed=True)
    assert report.ok


def test_csv():
    lines = make_report().render(OutputFormat.CSV).split('\n')
    assert lines[0] == 'kind,name,value,tolerance,passed,gloss'
    assert lines[1] == 'quantity,Phi,0.75,,,pragmatic information'
    assert lines[2] == 'flag,definitive,false,,,'
    assert lines[3] == 'check,decomposition,1e-17,1e-10,true,Phi - I - D'


def test_json():
    data = json.loads(make_report().render(OutputFormat.JSON))
    assert data['command'] == 'ensemble'
    assert data['quantities']['Phi']['value'] == 0.75
    assert data['flags'] == {'definitive': False}
    assert data['checks'][0]['tolerance'] == 1e-10
    assert data['ok'] is True


def test_input_digest(tmp_path):
    path = tmp_path / 'input.json'
    path.write_text('[1]')
    report = RunReport('kl')
    report.add_input(path)
    assert len(report[str(path)]) == 64


def test_sweep_frame():
    frame = sweep_frame(sweep(0.5, 3))
    assert list(frame.columns) == ['T', 'w', 'q1', 'd_win', 'd_loss', 'phi_bits']
    assert frame['T'].tolist() == [0, 1, 2, 3]


def test_render_frame_csv():
    frame = pd.DataFrame({'N': [1, 2], 'phi_running_bits': [1 / 3, 0.5]})
    text = render_frame(frame, OutputFormat.CSV, metadata='seed=1')
    assert text == '# seed=1\nN,phi_running_bits\n1,0.333333333333\n2,0.5\n'


def test_render_frame_json():
    frame = pd.DataFrame({'N': [1], 'phi_running_bits': [1 / 3]})
    data = json.loads(render_frame(frame, OutputFormat.JSON, metadata='seed=1'))
    assert data == {'metadata': 'seed=1', 'rows': [{'N': 1, 'phi_running_bits': 0.333333333333}]}

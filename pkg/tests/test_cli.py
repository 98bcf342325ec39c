import json

import pytest

from heunwkb.__main__ import main


def _json(capsys) -> dict:
    return json.loads(capsys.readouterr().out)


def test_registry(capsys):
    assert main(['registry']) == 0
    payload = _json(capsys)
    assert payload['schema'] == 1
    assert len(payload['cases']) == 17


def test_compute_leading_order(capsys):
    assert main(['compute', '--case', 'III3.tinf', '--k', '0', '--l', '0']) == 0
    payload = _json(capsys)
    assert payload['schema'] == 1
    assert payload['g_table'] == [{'k': 0, 'l': 0, 'coeff': '2'}]
    assert payload['E_series'] == [{'t_exp': '1/2', 'coeff': '2'}]


def test_compute_latex(capsys):
    assert main(['compute', '--case', 'III3.t0', '--k', '0', '--l', '1', '--format', 'latex']) == 0
    assert capsys.readouterr().out.startswith('E(t) = ')


def test_compute_writes_output_file(tmp_path):
    target = tmp_path / 'table.json'
    assert main(['compute', '--case', 'III3.tinf', '--k', '0', '--l', '0', '--output', str(target)]) == 0
    assert json.loads(target.read_text())['case'] == 'III3.tinf'


def test_unknown_case_is_a_usage_error():
    assert main(['compute', '--case', 'VII.t0']) == 2


def test_bad_arguments_are_a_usage_error():
    assert main(['compute']) == 2
    assert main(['frobnicate']) == 2


def test_verify_weak_coupling(capsys):
    assert main(['verify', '--case', 'III3.t0']) == 0
    payload = _json(capsys)
    assert [r['status'] for r in payload['reports']] == ['pass', 'pass']


def test_blocks_text(capsys):
    assert main(['blocks', '--block', 'III3.t0', '--check', '--format', 'text']) == 0
    assert capsys.readouterr().out.startswith('III3.t0: W = ')


def test_numcheck_closed_form(capsys):
    argv = ['numcheck', '--case', 'III3.t0', '--set', 'nu=2/5', '--g=-nu^2', '--points', '256', '--precision', '50']
    assert main(argv) == 0
    payload = _json(capsys)
    assert payload['status'] == 'pass'
    assert payload['tolerance'] == '1e-40'


def test_numcheck_rejects_malformed_assignment():
    assert main(['numcheck', '--case', 'III3.t0', '--set', 'nu']) == 2


@pytest.mark.slow
def test_numcheck_convergence(capsys):
    argv = ['numcheck', '--case', 'III3.tinf', '--set', 'nu=1/3', '--levels', '6',
            '--convergence', '1/100', '1/200', '1/400']
    assert main(argv) == 0
    payload = _json(capsys)
    assert payload['status'] == 'pass'
    assert payload['required'] == '27/4'
    assert len(payload['slopes']) == 2

"""Exit codes, output discipline, and the documented invocations."""

import json
import xml.dom.minidom

import pytest

from ribbonflow import __version__
from ribbonflow.cli import (EXIT_BUDGET, EXIT_NOT_RENORM, EXIT_OK,
                            EXIT_PARSE, main)
from ribbonflow.exact import QuadNum, parse_quad

GZ_PAIR = ['--family', 'gz_constant', '--family2', 'gz_exponential:t=2',
           '--theta', '1, -1+sqrt(2)', '--theta2', '4, -5+sqrt(41)']


def run(capsys, argv):
    code = main(argv)
    return code, capsys.readouterr().out


def csv_body(text):
    lines = [l for l in text.splitlines() if not l.startswith('#')]
    return lines[0].split(','), [l.split(',') for l in lines[1:]]


def test_omega_accepts_period_two(capsys):
    code, out = run(capsys, ['omega', '--n', '2', '--alpha', '1/2*sqrt(2)'])
    assert code == EXIT_OK
    header, rows = csv_body(out)
    assert rows[0][0] == 'in-omega'
    assert rows[0][2] == '0+2'


def test_omega_rejects_rational(capsys):
    code, out = run(capsys, ['omega', '--n', '2', '--alpha', '1/3'])
    assert code == EXIT_NOT_RENORM
    assert 'rational' in out


def test_omega_rejects_gap_endpoint(capsys):
    code, out = run(capsys, ['omega', '--n', '3', '--alpha',
                             '5/6+1/6*sqrt(5)'])
    assert code == EXIT_NOT_RENORM
    assert 'excluded tail' in out


def test_eigen_tripod_example(capsys):
    code, out = run(capsys, ['eigen', '--family', 'tripod', '--t',
                             'sqrt(2)'])
    assert code == EXIT_OK
    assert '# lambda 3/2*sqrt(2)' in out
    assert '# residual_ok 1' in out


def test_shrink_example_all_critical(capsys):
    code, out = run(capsys, ['shrink', '--lambda', '2', '--theta',
                             '1, -1+sqrt(2)', '--depth', '8'])
    assert code == EXIT_OK
    header, rows = csv_body(out)
    assert header == ['n', 'letter', 'x', 'y', 'sign', 'critical']
    assert all(r[4] == '++' for r in rows)
    assert all(r[5] == '1' for r in rows[1:])
    letters = [r[1] for r in rows[1:]]
    assert letters[:4] == ['h^-1', 'v^-1', 'h^-1', 'v^-1']


def test_shrink_cells_roundtrip_exactly(capsys):
    code, out = run(capsys, ['shrink', '--lambda', '5/2', '--theta',
                             '4, -5+sqrt(41)', '--depth', '6'])
    assert code == EXIT_OK
    _, rows = csv_body(out)
    contraction = parse_quad(rows[2][2]) / parse_quad(rows[0][2])
    for r in rows:
        for cell in (r[2], r[3]):
            q = parse_quad(cell)
            assert str(q) == cell
    assert contraction == QuadNum(33, -5, 41) / 8


def test_headers_record_version_and_seed(capsys):
    code, out = run(capsys, ['growth', '--family', 'gz_constant',
                             '--depth', '3', '--seed', '7'])
    assert code == EXIT_OK
    assert out.splitlines()[0] == '# ribbonflow %s' % __version__
    assert out.splitlines()[1] == '# seed 7'


def test_json_output_is_structured(capsys):
    code, out = run(capsys, ['omega', '--n', '2', '--alpha', '1/2*sqrt(2)',
                             '--format', 'json'])
    assert code == EXIT_OK
    doc = json.loads(out)
    assert doc['version'] == __version__
    assert doc['seed'] == 0
    assert doc['columns'] == ['kind', 'reason', 'period']


def test_byte_identical_reruns(tmp_path, capsys):
    paths = [tmp_path / 'a.csv', tmp_path / 'b.csv']
    for p in paths:
        code = main(['survivor', *GZ_PAIR, '--depth', '6', '--window', '6',
                     '--out', str(p)])
        assert code == EXIT_OK
    capsys.readouterr()
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_survivor_pass_and_witness(capsys):
    code, out = run(capsys, ['survivor', *GZ_PAIR, '--depth', '8',
                             '--window', '8'])
    assert code == EXIT_OK
    assert 'pass' in out
    perturbed = list(GZ_PAIR)
    perturbed[7] = '4, -4999/1000+sqrt(41)'
    code, out = run(capsys, ['survivor', *perturbed, '--depth', '12',
                             '--window', '12'])
    assert code == EXIT_OK
    _, rows = csv_body(out)
    assert rows[0][0] == 'witness'
    assert int(rows[0][1]) <= 12


def test_survivor_requires_renormalizable_direction(capsys):
    bad = list(GZ_PAIR)
    bad[5] = '1, 1/3'
    code, _ = run(capsys, ['survivor', *bad, '--depth', '6',
                           '--window', '4'])
    assert code == EXIT_NOT_RENORM


def test_decay_reports_halving(capsys):
    code, out = run(capsys, ['decay', *GZ_PAIR, '--depth', '6',
                             '--window', '3'])
    assert code == EXIT_OK
    header, rows = csv_body(out)
    assert header[:3] == ['vertex', 'n', 'value']
    assert all(r[5] == '1' for r in rows)
    assert all(r[4] != '' for r in rows)


def test_growth_tight_on_trees(capsys):
    code, out = run(capsys, ['growth', '--family', 'tripod', '--t', '2',
                             '--depth', '6'])
    assert code == EXIT_OK
    _, rows = csv_body(out)
    assert all(r[3] == '1' and r[4] == '1' for r in rows[2:])


def test_conjugate_full_bottom_edge(capsys):
    code, out = run(capsys, ['conjugate', *GZ_PAIR, '--depth', '8'])
    assert code == EXIT_OK
    _, rows = csv_body(out)
    full = [r for r in rows if r[0] == 'bottom'][-1]
    assert parse_quad(full[2]) == QuadNum('1/2')
    assert parse_quad(full[4]) == 0


def test_simulate_surface_exact_cells(capsys):
    code, out = run(capsys, ['simulate', '--family', 'gz_constant',
                             '--theta', '1, -1+sqrt(2)', '--steps', '5'])
    assert code == EXIT_OK
    _, rows = csv_body(out)
    assert len(rows) == 5
    for r in rows:
        parse_quad(r[2])


def test_simulate_skew_budget_exit(capsys, monkeypatch):
    monkeypatch.setenv('RIBBONFLOW_BUDGET', '3')
    code, _ = run(capsys, ['simulate', '--group', 'Z', '--generators',
                           '(1,1)', '--alpha', '1/2*sqrt(2)', '--steps',
                           '50'])
    assert code == EXIT_BUDGET


def test_simulate_skew_float_mode(capsys):
    code, out = run(capsys, ['simulate', '--group', 'Z', '--generators',
                             '(1,-1)', '--alpha', '1/2*sqrt(2)', '--mode',
                             'float', '--steps', '3'])
    assert code == EXIT_OK
    _, rows = csv_body(out)
    assert rows[0][2] == '1'
    assert abs(float(rows[0][1]) - 0.7071067811865476) == 0


def test_parse_errors_exit_two(capsys):
    assert main(['shrink', '--lambda', '2', '--theta', 'nope']) == EXIT_PARSE
    assert main(['omega', '--n', '2', '--alpha', '0.707']) == EXIT_PARSE
    assert main(['eigen', '--family', 'unknown']) == EXIT_PARSE
    assert main(['render', '--family', 'gz_constant',
                 '--format', 'csv']) == EXIT_PARSE
    capsys.readouterr()


def test_missing_subcommand_exits_two(capsys):
    assert main([]) == EXIT_PARSE
    capsys.readouterr()


def test_render_surface_svg(tmp_path, capsys):
    out = tmp_path / 'surface.svg'
    code = main(['render', '--family', 'gz_exponential:t=2', '--depth',
                 '2', '--out', str(out)])
    capsys.readouterr()
    assert code == EXIT_OK
    doc = xml.dom.minidom.parse(str(out))
    assert doc.documentElement.tagName == 'svg'
    assert out.read_text().startswith('<!-- ribbonflow %s' % __version__)


def test_render_limit_set_svg(tmp_path, capsys):
    out = tmp_path / 'limit.svg'
    code = main(['render', '--style', 'limitset', '--lambda', '3',
                 '--depth', '3', '--out', str(out)])
    capsys.readouterr()
    assert code == EXIT_OK
    text = out.read_text()
    xml.dom.minidom.parse(str(out))
    assert '3-sqrt(5)' in text and '3+sqrt(5)' in text
    assert text.count('<line') == 1 + sum(4 * 3 ** k for k in range(3)) + 1


def test_render_limit_set_needs_hyperbolic_lambda(capsys):
    assert main(['render', '--style', 'limitset', '--lambda', '2',
                 '--depth', '2']) == EXIT_PARSE
    capsys.readouterr()

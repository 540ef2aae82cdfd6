import json

import pytest

from cubiclab.cli import CONFIG_ERROR, INPUT_ERROR, build_parser, main


def run(capsys, *argv):
    status = main(list(argv))
    out, err = capsys.readouterr()
    return status, out, err


def test_scan_tsv(capsys):
    status, out, _ = run(capsys, 'scan', '--b-min', '1', '--b-max', '3', '--checks', 'factor,root_number')
    assert status == 0
    lines = out.splitlines()
    assert lines[0].startswith('b\tm\tfactorization')
    assert [line.split('\t')[1] for line in lines[1:]] == ['11', '67', '219']


def test_scan_json_to_file(capsys, tmp_path):
    target = tmp_path / 'scan.json'
    status, out, _ = run(capsys, 'scan', '--b-min', '1', '--b-max', '2', '--checks', 'factor', '--format', 'json',
                         '--out', str(target))
    assert status == 0 and out == ''
    assert json.loads(target.read_text())['checks'] == ['factor']


def test_scan_rejects_unknown_check(capsys):
    status, _, err = run(capsys, 'scan', '--checks', 'factor,plots')
    assert status == CONFIG_ERROR
    assert 'plots' in err


def test_scan_with_missing_config(capsys):
    status, _, err = run(capsys, 'scan', '--config', '/nonexistent/config.json')
    assert status == CONFIG_ERROR
    assert 'not found' in err


def test_factor_numbers(capsys):
    status, out, _ = run(capsys, 'factor', '5639755', '54')
    assert status == 0
    assert out.splitlines() == ['5639755: 5 * 11 * 41^2 * 61 squared: 41', '54: 2 * 3^3 (not cubefree) squared: 3']


def test_factor_range(capsys):
    status, out, _ = run(capsys, 'factor', '--b-min', '88', '--b-max', '89')
    assert status == 0
    assert '5451779' in out and '5 * 11 * 41^2 * 61' in out


def test_points(capsys):
    status, out, _ = run(capsys, 'points', '--m', '11', '--search-t-max', '2', '--search-r-max', '100')
    assert status == 0
    lines = out.splitlines()
    assert lines[0] == 'x\ty\tt\talpha'
    assert '3\t4\t1\t3 - w' in lines
    assert '9/4\t5/8\t2\t9 - 4*w' in lines


def test_points_need_a_field(capsys):
    status, _, err = run(capsys, 'points')
    assert status == CONFIG_ERROR
    assert '--m/--b' in err


def test_hcf_alpha(capsys):
    status, out, _ = run(capsys, 'hcf', '--m', '11', '--alpha', '9,-4,0')
    assert status == 0
    document = json.loads(out)
    assert document['valid'] is True
    assert document['minpoly'] == ['1', '0', '-27', '0', '243', '0', '-25']


def test_hcf_from_curve(capsys):
    status, out, _ = run(capsys, 'hcf', '--b', '1', '--search-t-max', '4', '--search-r-max', '1000')
    assert status == 0
    document = json.loads(out)
    assert document['found'] is True
    assert document['via'] == 'even_t'


def test_hcf_unit(capsys):
    status, out, _ = run(capsys, 'hcf', '--unit', '4')
    assert status == 0
    assert json.loads(out)['m'] == '67'
    status, _, err = run(capsys, 'hcf', '--unit', '2')
    assert status == INPUT_ERROR
    assert err.startswith('cubiclab:')


def test_classgroup(capsys):
    status, out, _ = run(capsys, 'classgroup', '--m', '11', '--points', '--search-t-max', '2',
                         '--search-r-max', '100')
    assert status == 0
    document = json.loads(out)
    assert document['h'] == 2
    assert document['structure'] == 'Z/2'
    assert document['minkowski_bound'] == '17'
    trivial = {row['point']: row['trivial'] for row in document['points']}
    assert trivial['(3, 4)'] is True
    assert trivial['(9/4, 5/8)'] is False


def test_classgroup_rejects_non_monogenic(capsys):
    status, _, err = run(capsys, 'classgroup', '--m', '10')
    assert status == INPUT_ERROR
    assert 'not maximal' in err


def test_identities(capsys):
    status, out, _ = run(capsys, 'identities', '--b-min', '1', '--b-max', '6')
    assert status == 0
    lines = out.splitlines()
    assert lines[1] == '1\tTrue\tTrue\tTrue\tTrue\t'
    assert 'x numerator fit: 2*b**3 + 1' in lines
    assert 'y numerator fit: 3*b**3 + 1' in lines


def test_quadmap(capsys):
    status, out, _ = run(capsys, 'quadmap', '--m', '11', '--search-t-max', '1', '--search-r-max', '100')
    assert status == 0
    document = json.loads(out)
    assert document['points'] == ['(3, 4)', '(15, 58)']
    assert len(document['quadratic']) == 1


def test_version_and_help(capsys):
    with pytest.raises(SystemExit):
        main(['--version'])
    assert 'cubiclab' in capsys.readouterr().out
    with pytest.raises(SystemExit):
        main(['scan', '--help'])
    assert 'always: b, m, factorization' in capsys.readouterr().out
    assert build_parser().prog == 'cubiclab'

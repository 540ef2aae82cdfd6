import json

import pytest

from cubiclab import Scan, emit, parse_report, run_scan, threads_from_environment, write_report
from cubiclab.checks import ANNOTATION_COLUMNS, BASE_COLUMNS, CHECKS, annotated_rank, columns_for, run_checks
from cubiclab.config_loader import DEFAULTS, load_scan_config
from cubiclab.errors import ConfigError
from cubiclab.intarith import cubefree_squarefree_profile
from tools import family_m

PARAMS = {'t_max': 4, 'r_max': 2000, 'relation_bound': 10, 'principal_bound': 12, 'precision_cap_bits': 10000}


def test_columns_follow_enabled_checks():
    columns = columns_for(['root_number', 'factor'])
    assert columns[:len(BASE_COLUMNS)] == BASE_COLUMNS
    assert columns.index('m_mod_100') < columns.index('w')
    assert columns[-4:] == ANNOTATION_COLUMNS + ('errors',)
    assert 'h' not in columns
    assert list(CHECKS) == ['factor', 'root_number', 'family_point', 'identities', 'points', 'certificate', 'unit',
                            'quad_classgroup', 'classgroup']


def test_row_for_b_one():
    row = run_checks((1, ['factor', 'root_number', 'family_point', 'identities'], PARAMS))
    assert row['m'] == 11
    assert row['factorization'] == '11'
    assert row['monogenic'] is True
    assert row['w'] == 1
    assert row['parity_prediction'] == 'even'
    assert row['family_point'] == '(3, 4)'
    assert row['family_point_torsion'] is False
    assert row['eps_alpha_beta'] is True
    assert row['printed_root_cube'] == '-tau'
    assert row['annotated_rank'] == '2'
    assert row['annotated_h'] == 2
    assert row['errors'] == ''


def test_row_for_b_89():
    row = run_checks((89, ['factor', 'root_number'], PARAMS))
    assert row['factorization'] == '5 * 11 * 41^2 * 61'
    assert row['squared_primes'] == '41'
    assert row['odd_class_candidate'] is True
    assert row['w'] == -1
    assert row['annotated_odd_h'] is True
    assert row['annotated_rank'] == '1'


def test_arithmetic_rows_with_heavier_checks():
    row = run_checks((1, ['points', 'certificate', 'quad_classgroup', 'classgroup'], PARAMS))
    assert row['certificate_valid'] is True
    assert row['certificate_alpha'] == '9 - 4*w'
    assert row['points_found'] >= 3
    assert row['two_rank_bound'] >= 1
    assert row['quad_h'] == 1
    assert row['h'] == 2
    assert row['errors'] == ''


def test_classgroup_check_uses_the_principal_bound():
    row = run_checks((1, ['classgroup'], PARAMS))
    assert row['family_point_ideal'] == 'p2[1]^2'
    assert row['family_point_ideal_status'] == 'principal'
    row = run_checks((1, ['classgroup'], dict(PARAMS, principal_bound=0)))
    assert row['family_point_ideal_status'] == 'not_found'
    assert row['h'] == 2


def test_unit_check_needs_even_b():
    assert run_checks((1, ['unit'], PARAMS))['unit_certificate'] is None
    assert run_checks((2, ['unit'], PARAMS))['unit_certificate'] is True


def test_failing_check_is_recorded_not_raised():
    # 5**3 divides 8b**3 + 3 for one b mod 125
    b = next(b for b in range(1, 400) if not cubefree_squarefree_profile(family_m(b)).is_cubefree)
    row = run_checks((b, ['root_number', 'identities'], PARAMS))
    assert row['b'] == b
    assert row['cubefree'] is False
    assert row['w'] is None
    assert 'root_number' in row['errors'] and 'identities' in row['errors']


def test_odd_class_number_list_has_one_squared_prime():
    for b in [89, 119, 169, 177, 209, 369, 503, 615, 661, 719, 787, 903, 1069, 1145, 1219, 1319, 1365, 1387, 1419,
              1629]:
        assert len(cubefree_squarefree_profile(family_m(b)).squared_primes_2mod3) == 1
    row = run_checks((419, ['factor', 'root_number'], PARAMS))
    assert row['factorization'] == '5^2 * 11^2 * 227 * 857'
    assert row['w'] == 1
    assert row['odd_class_candidate'] is False


def test_annotated_rank_range():
    assert annotated_rank(9) == '4'
    assert annotated_rank(90) == '2'
    assert annotated_rank(91) is None


def test_scan_rows_are_sorted_and_complete():
    report = Scan(b_min=85, b_max=89, checks=['factor']).run()
    assert report.column('b') == [85, 86, 87, 88, 89]
    assert report.row(86)['squared_primes'] == '23'
    assert report.row(88)['factorization'] == '5451779'
    with pytest.raises(KeyError):
        report.row(90)


def test_scan_does_not_depend_on_processes():
    single = Scan(b_min=1, b_max=12, checks=['factor', 'root_number'], processes=1).run()
    double = Scan(b_min=1, b_max=12, checks=['factor', 'root_number'], processes=2).run()
    assert emit(single, 'tsv') == emit(double, 'tsv')
    assert emit(single, 'json') == emit(double, 'json')


def test_empty_range():
    report = Scan(b_min=5, b_max=4, checks=['factor']).run()
    assert report.rows == ()
    assert emit(report, 'tsv').splitlines()[0].startswith('b\tm\tfactorization')


def test_tsv_rendering():
    report = Scan(b_min=1, b_max=3, checks=['factor', 'root_number']).run()
    lines = emit(report, 'tsv').splitlines()
    assert lines[0].split('\t') == list(report.columns)
    assert len(lines) == 4
    assert lines[1].split('\t')[:3] == ['1', '11', '11']
    parsed = parse_report(emit(report, 'tsv'), 'tsv')
    assert parsed.column('factorization') == ['11', '67', '3 * 73']


def test_json_rendering():
    report = Scan(b_min=1, b_max=2, checks=['factor']).run()
    text = emit(report, 'json')
    document = json.loads(text)
    assert document['format_version'] == 1
    assert document['annotation_label'] == 'external annotation, not computed'
    assert text.endswith('\n')
    assert parse_report(text, 'json').rows == report.rows
    with pytest.raises(ValueError):
        emit(report, 'xml')


def test_write_report(tmp_path):
    report = Scan(b_min=1, b_max=2, checks=['factor']).run()
    path = tmp_path / 'report.tsv'
    write_report(report, str(path), 'tsv')
    assert path.read_text(encoding='utf-8') == emit(report, 'tsv')


def test_run_scan_from_configuration(tmp_path):
    config = tmp_path / 'config.json'
    config.write_text(json.dumps({'scan': {'b_min': 1, 'b_max': 3, 'checks': ['factor']}}))
    report = run_scan(load_scan_config(str(config)), processes=1)
    assert report.column('m') == [11, 67, 219]
    assert report.config['params']['t_max'] == DEFAULTS['search']['t_max']


def test_threads_from_environment(monkeypatch):
    monkeypatch.delenv('CUBICLAB_THREADS', raising=False)
    assert threads_from_environment() == 1
    monkeypatch.setenv('CUBICLAB_THREADS', '3')
    assert threads_from_environment() == 3
    monkeypatch.setenv('CUBICLAB_THREADS', 'many')
    with pytest.raises(ConfigError):
        threads_from_environment()
    monkeypatch.setenv('CUBICLAB_THREADS', '0')
    with pytest.raises(ConfigError):
        threads_from_environment()

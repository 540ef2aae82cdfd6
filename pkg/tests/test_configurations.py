import json
import logging
import os

import pytest

from cubiclab.config_loader import DEFAULTS, KNOWN_CHECKS, ConfigLoader, load_scan_config
from cubiclab.errors import ConfigError
from cubiclab.logger import ScanLogger, create_scan_logger

CONFIG_DIR = os.path.join(os.path.dirname(__file__), os.pardir, 'scan_configurations')


def write_config(tmp_path, document):
    path = tmp_path / 'config.json'
    path.write_text(json.dumps(document))
    return str(path)


def test_defaults_without_file():
    loader = load_scan_config()
    assert loader.get_scan_parameters()['checks'] == DEFAULTS['scan']['checks']
    assert loader.get_search_bounds() == {'t_max': 20, 'r_max': 100000}
    assert loader.get_classgroup_parameters()['relation_bound'] == 10
    assert loader.get_square_test_parameters() == {'precision_cap_bits': 10000}
    assert loader.get_logging_config()['scan_logging'] is False


@pytest.mark.parametrize('name', sorted(os.listdir(CONFIG_DIR)))
def test_shipped_configurations_load(name):
    loader = load_scan_config(os.path.join(CONFIG_DIR, name))
    scan = loader.get_scan_parameters()
    assert scan['b_min'] <= scan['b_max']
    assert set(scan['checks']) <= set(KNOWN_CHECKS)


def test_overrides_win_over_file(tmp_path):
    path = write_config(tmp_path, {'scan': {'b_min': 2, 'b_max': 9}, 'search': {'t_max': 3}})
    loader = load_scan_config(path, {'scan': {'b_max': 5, 'checks': 'factor,points'}, 'search': {'t_max': None}})
    scan = loader.get_scan_parameters()
    assert (scan['b_min'], scan['b_max']) == (2, 5)
    assert scan['checks'] == ['factor', 'points']
    assert loader.get_search_bounds()['t_max'] == 3


def test_missing_file():
    with pytest.raises(FileNotFoundError):
        ConfigLoader('/nonexistent/config.json').load_config()


@pytest.mark.parametrize('document, key', [
    ({'plot': {}}, 'plot'),
    ({'scan': []}, 'scan'),
    ({'scan': {'b_min': 0}}, 'scan.b_min'),
    ({'scan': {'b_min': 5, 'b_max': 2}}, 'scan.b_max'),
    ({'scan': {'checks': ['factor', 'plots']}}, 'scan.checks'),
    ({'scan': {'format': 'xml'}}, 'scan.format'),
    ({'search': {'t_max': 0}}, 'search.t_max'),
    ({'square_test': {'precision_cap_bits': True}}, 'square_test.precision_cap_bits'),
    ({'logging': {'console_level': 'LOUD'}}, 'logging.console_level'),
])
def test_invalid_configurations(tmp_path, document, key):
    with pytest.raises(ConfigError) as info:
        load_scan_config(write_config(tmp_path, document))
    assert info.value.key == key


def test_invalid_json(tmp_path):
    path = tmp_path / 'broken.json'
    path.write_text('{"scan": ')
    with pytest.raises(ConfigError):
        load_scan_config(str(path))


def test_scan_logger_writes_findings(tmp_path):
    path = tmp_path / 'log.txt'
    scan_logger = ScanLogger(str(path), console_level='OFF', scan_name='unit scan')
    scan_logger.log_scan_start({'b range': '1..2'})
    scan_logger.set_b(1)
    scan_logger.set_phase('identities')
    scan_logger.log_finding('cube identity does not hold')
    logging.getLogger('cubiclab.cubic').debug('raising precision')
    scan_logger.log_scan_end({'rows': 2})
    scan_logger.close()
    text = path.read_text(encoding='utf-8')
    assert 'UNIT SCAN LOG' in text
    assert 'b = 1, m = 11' in text
    assert 'FINDING: b = 1: cube identity does not hold' in text
    assert 'raising precision' in text
    assert 'findings: 1' in text
    assert scan_logger.findings == 1


def test_create_scan_logger(tmp_path):
    assert create_scan_logger({'logging': {'scan_logging': False}}, str(tmp_path)) is None
    target = tmp_path / 'results'
    scan_logger = create_scan_logger({'logging': {'scan_logging': True, 'log_filename': 'run.txt',
                                                  'console_level': 'OFF'}}, str(target))
    try:
        assert scan_logger.log_file_path == os.path.join(str(target), 'run.txt')
        assert os.path.exists(scan_logger.log_file_path)
    finally:
        scan_logger.close()

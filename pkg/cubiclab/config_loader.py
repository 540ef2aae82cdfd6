"""
Configuration loader for cubiclab scans
"""

import json
import logging
import os
from typing import Any, Dict, Optional

from .errors import ConfigError

logger = logging.getLogger(__name__)

KNOWN_CHECKS = ('factor', 'root_number', 'family_point', 'identities', 'points', 'certificate', 'unit',
                'quad_classgroup', 'classgroup')
FORMATS = ('tsv', 'json')
CONSOLE_LEVELS = ('DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL', 'OFF')

DEFAULTS = {
    'scan': {'name': 'cubiclab scan', 'b_min': 1, 'b_max': 30,
             'checks': ['factor', 'root_number', 'family_point', 'identities'],
             'format': 'tsv', 'result_path': 'results'},
    'search': {'t_max': 20, 'r_max': 100000},
    'classgroup': {'relation_bound': 10, 'principal_bound': 12},
    'square_test': {'precision_cap_bits': 10000},
    'logging': {'scan_logging': False, 'log_filename': 'scan_log.txt', 'console_level': 'WARNING'},
}


class ConfigLoader:
    """ config loader for family scans.

    Missing sections and keys fall back to :data:`DEFAULTS`; ``overrides``
    (the command line) win over the file.
    """

    def __init__(self, config_path: Optional[str] = None):
        self.config_path = config_path
        self.config = None

    def load_config(self, overrides: Optional[Dict[str, Dict[str, Any]]] = None) -> Dict[str, Any]:
        """Load configuration from the JSON file, if any, then apply overrides."""
        document = {}
        if self.config_path is not None:
            if not os.path.exists(self.config_path):
                raise FileNotFoundError(f"Configuration file not found: {self.config_path}")
            with open(self.config_path, 'r') as f:
                try:
                    document = json.load(f)
                except json.JSONDecodeError as error:
                    raise ConfigError(self.config_path, 'not valid JSON (%s)' % error)
            logger.debug('configuration loaded from %s', self.config_path)
        self.config = {section: dict(values) for section, values in DEFAULTS.items()}
        for section, values in document.items():
            if section not in DEFAULTS:
                raise ConfigError(section, 'unknown section')
            if not isinstance(values, dict):
                raise ConfigError(section, 'must be an object')
            self.config[section].update(values)
        for section, values in (overrides or {}).items():
            self.config[section].update({k: v for k, v in values.items() if v is not None})
        self.validate()
        return self.config

    def validate(self):
        scan = self.config['scan']
        for key in ('b_min', 'b_max'):
            if not isinstance(scan[key], int) or isinstance(scan[key], bool):
                raise ConfigError('scan.%s' % key, 'must be an integer')
        if scan['b_min'] < 1:
            raise ConfigError('scan.b_min', 'must be at least 1')
        if scan['b_max'] < scan['b_min'] - 1:
            raise ConfigError('scan.b_max', 'must be at least b_min - 1')
        if isinstance(scan['checks'], str):
            scan['checks'] = [c for c in scan['checks'].split(',') if c]
        unknown = [c for c in scan['checks'] if c not in KNOWN_CHECKS]
        if unknown:
            raise ConfigError('scan.checks', 'unknown check(s) %s' % ', '.join(unknown))
        if scan['format'] not in FORMATS:
            raise ConfigError('scan.format', 'must be one of %s' % ', '.join(FORMATS))
        for section, key in (('search', 't_max'), ('search', 'r_max'), ('classgroup', 'relation_bound'),
                             ('classgroup', 'principal_bound'), ('square_test', 'precision_cap_bits')):
            value = self.config[section][key]
            if not isinstance(value, int) or isinstance(value, bool) or value < 1:
                raise ConfigError('%s.%s' % (section, key), 'must be a positive integer')
        level = str(self.config['logging']['console_level']).upper()
        if level not in CONSOLE_LEVELS:
            raise ConfigError('logging.console_level', 'must be one of %s' % ', '.join(CONSOLE_LEVELS))

    def get_scan_parameters(self) -> Dict[str, Any]:
        """Get scan parameters."""
        scan = self.config['scan']
        return {
            'name': scan['name'],
            'b_min': scan['b_min'],
            'b_max': scan['b_max'],
            'checks': list(scan['checks']),
            'format': scan['format'],
            'result_path': scan['result_path'],
        }

    def get_search_bounds(self) -> Dict[str, int]:
        return dict(self.config['search'])

    def get_classgroup_parameters(self) -> Dict[str, int]:
        return dict(self.config['classgroup'])

    def get_square_test_parameters(self) -> Dict[str, int]:
        return dict(self.config['square_test'])

    def get_logging_config(self) -> Dict[str, Any]:
        return dict(self.config['logging'])


def load_scan_config(config_path: Optional[str] = None, overrides=None) -> ConfigLoader:
    """Load and return a config loader."""
    loader = ConfigLoader(config_path)
    loader.load_config(overrides)
    return loader

# Copyright 2024 The cubiclab developers
#
# Licensed under the Apache License, Version 2.0 (the "License"); you may not
# use this file except in compliance with the License. You may obtain a copy
# of the License at
#       http://www.apache.org/licenses/LICENSE-2.0
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
# WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
# License for the specific language governing permissions and limitations under
# the License.
""" Pure cubic fields Q(cbrt(m)) for m = 8b**3 + 3, the curves
y**2 = x**3 - m and the unramified quadratic extensions the curves give.

A scan runs the per-b checks over a range of b and returns a report::

    from cubiclab import Scan, emit

    scan = Scan(b_min=1, b_max=200, checks=['factor', 'root_number'])
    report = scan.run()
    print(emit(report, 'tsv'))

The arithmetic lives in the submodules: :mod:`cubiclab.intarith`,
:mod:`cubiclab.cubic`, :mod:`cubiclab.quad`, :mod:`cubiclab.mordell`,
:mod:`cubiclab.classgrp` and :mod:`cubiclab.hcf`.
"""
import logging
import os

from .checks import columns_for, run_checks
from .config_loader import DEFAULTS, ConfigLoader, load_scan_config  # noqa: F401
from .cubic import CubicElement, CubicField  # noqa: F401
from .errors import CubiclabError, ConfigError  # noqa: F401
from .mordell import Curve, CurvePoint  # noqa: F401
from .report import ScanReport, emit, parse_report, write_report  # noqa: F401
from .scheduler import scheduler_for

__version__ = '0.1.0'

logger = logging.getLogger(__name__)


def threads_from_environment(default: int = 1) -> int:
    """ Worker count from CUBICLAB_THREADS """
    value = os.environ.get('CUBICLAB_THREADS')
    if value is None or value == '':
        return default
    try:
        processes = int(value)
    except ValueError:
        raise ConfigError('CUBICLAB_THREADS', 'must be an integer, got %r' % value)
    if processes < 1:
        raise ConfigError('CUBICLAB_THREADS', 'must be at least 1')
    return processes


class Scan(object):
    """ A run of per-b checks over b_min <= b <= b_max.

    Args:
        b_min, b_max:
            the range of b; an empty range gives a report without rows

        checks:
            names from :data:`cubiclab.checks.CHECKS`

        search, classgroup, square_test:
            dicts overriding the defaults of the configuration sections
            of the same names

        processes (optional):
            number of worker processes; the rows do not depend on it

        scan_logger (optional):
            a :class:`cubiclab.logger.ScanLogger` that records progress
            and findings
    """

    def __init__(self, b_min=1, b_max=30, checks=None, search=None, classgroup=None, square_test=None,
                 processes=1, name='cubiclab scan', scan_logger=None):
        self.b_min = b_min
        self.b_max = b_max
        self.checks = tuple(checks if checks is not None else DEFAULTS['scan']['checks'])
        self.name = name
        self.processes = processes
        self.scan_logger = scan_logger
        self.params = {}
        for section, values in (('search', search), ('classgroup', classgroup), ('square_test', square_test)):
            merged = dict(DEFAULTS[section])
            merged.update(values or {})
            self.params.update(merged)

    @classmethod
    def from_config(cls, loader: ConfigLoader, processes=1, scan_logger=None) -> 'Scan':
        scan = loader.get_scan_parameters()
        return cls(scan['b_min'], scan['b_max'], scan['checks'], loader.get_search_bounds(),
                   loader.get_classgroup_parameters(), loader.get_square_test_parameters(),
                   processes, scan['name'], scan_logger)

    @property
    def config(self) -> dict:
        return {'b_min': self.b_min, 'b_max': self.b_max, 'checks': list(self.checks), 'params': dict(self.params)}

    def run(self) -> ScanReport:
        sl = self.scan_logger
        if sl is not None:
            sl.log_scan_start({'b range': '%i..%i' % (self.b_min, self.b_max), 'checks': ', '.join(self.checks),
                               'processes': self.processes})
        tasks = [(b, self.checks, self.params) for b in range(self.b_min, self.b_max + 1)]
        runner = scheduler_for(self.processes)
        try:
            rows = runner.map(run_checks, tasks)
        finally:
            runner.close()
        rows = sorted(rows, key=lambda row: row['b'])
        if sl is not None:
            for row in rows:
                self._log_row(row)
            if any(row.get('printed_root_cube') == '-tau' for row in rows):
                sl.current_b = None
                sl.log_finding('((1 + sqrt(-m))/2)^3 = -tau, so the cube identity is checked for (-1 - sqrt(-m))/2')
            sl.log_scan_end({'rows': len(rows)})
        return ScanReport(self.b_min, self.b_max, self.checks, columns_for(self.checks), tuple(rows),
                          __version__, self.config)

    def _log_row(self, row):
        sl = self.scan_logger
        sl.set_b(row['b'])
        sl.log_phase_summary('m = %s' % row['factorization'])
        if row['errors']:
            sl.log_finding(row['errors'])
        for column in ('doubling_identity', 'eps_alpha_beta', 'cube_identity', 'footnote_identity'):
            if row.get(column) is False:
                sl.log_finding('%s does not hold' % column)
        if row.get('family_point_torsion'):
            sl.log_finding('family point is torsion')
        if row.get('certificate_valid') is False:
            sl.log_finding('no unramified extension certified: %s' % row['certificate_failures'])
        if row.get('twentyfive_divides') is False:
            sl.log_finding('m = %s mod 100 but 25 does not divide m' % row['m_mod_100'])


def run_scan(loader: ConfigLoader, processes=None, scan_logger=None) -> ScanReport:
    """ Runs the scan a configuration describes """
    if processes is None:
        processes = threads_from_environment()
    return Scan.from_config(loader, processes, scan_logger).run()

""" Scan reports and their TSV / JSON renderings.

Both renderings are byte-stable: they contain no timestamps, rows are
sorted by b and the JSON keys are sorted.
"""
import io
import json
from dataclasses import dataclass, field
from typing import Any, Dict, List, Tuple

import pandas as pd

from .checks import annotations

REPORT_FORMAT_VERSION = 1
FORMATS = ('tsv', 'json')


@dataclass(frozen=True)
class ScanReport:
    b_min: int
    b_max: int
    checks: Tuple[str, ...]
    columns: Tuple[str, ...]
    rows: Tuple[Dict[str, Any], ...]
    version: str
    config: Dict[str, Any] = field(default_factory=dict)

    @property
    def annotation_label(self) -> str:
        return annotations()['label']

    def column(self, name: str) -> List[Any]:
        return [row[name] for row in self.rows]

    def row(self, b: int) -> Dict[str, Any]:
        for row in self.rows:
            if row['b'] == b:
                return row
        raise KeyError(b)

    def to_dataframe(self) -> pd.DataFrame:
        return pd.DataFrame(list(self.rows), columns=list(self.columns), dtype=object)

    def to_dict(self) -> dict:
        return {'format_version': REPORT_FORMAT_VERSION,
                'version': self.version,
                'b_min': self.b_min,
                'b_max': self.b_max,
                'checks': list(self.checks),
                'columns': list(self.columns),
                'config': self.config,
                'annotation_label': self.annotation_label,
                'rows': [dict(row) for row in self.rows]}


def emit(report: ScanReport, format: str = 'tsv') -> str:
    """ The report as TSV (one row per b, empty cells for missing values) or JSON """
    if format == 'tsv':
        return report.to_dataframe().to_csv(sep='\t', index=False, lineterminator='\n')
    if format == 'json':
        return json.dumps(report.to_dict(), indent=2, sort_keys=True) + '\n'
    raise ValueError('unknown report format %r, expected one of %s' % (format, ', '.join(FORMATS)))


def parse_report(text: str, format: str = 'json') -> ScanReport:
    """ Inverse of :func:`emit`; TSV cells come back as strings """
    if format == 'json':
        document = json.loads(text)
        if document.get('format_version') != REPORT_FORMAT_VERSION:
            raise ValueError('unsupported report format %r' % document.get('format_version'))
        return ScanReport(document['b_min'], document['b_max'], tuple(document['checks']),
                          tuple(document['columns']), tuple(document['rows']), document['version'],
                          document['config'])
    if format == 'tsv':
        frame = pd.read_csv(io.StringIO(text), sep='\t', dtype=str, keep_default_na=False)
        rows = tuple(frame.to_dict('records'))
        bs = [int(row['b']) for row in rows]
        return ScanReport(min(bs, default=0), max(bs, default=-1), (), tuple(frame.columns), rows, '')
    raise ValueError('unknown report format %r, expected one of %s' % (format, ', '.join(FORMATS)))


def write_report(report: ScanReport, path: str, format: str = 'tsv'):
    text = emit(report, format)
    with open(path, 'w', encoding='utf-8', newline='') as f:
        f.write(text)

"""
Result persistence: append-only JSON lines behind one metadata header line,
and CSV renders with the same column names.
"""
import csv
import io
import json
import logging
from pathlib import Path

from django.utils import timezone

logger = logging.getLogger(__name__)


def dump_record(record):
    return json.dumps(record, sort_keys=True, separators=(',', ':'))


def _cell(value):
    if isinstance(value, (dict, list)):
        return json.dumps(value, sort_keys=True, separators=(',', ':'))
    if value is None:
        return ''
    return value


def _columns(records):
    columns = []
    for record in records:
        for key in record:
            if key not in columns:
                columns.append(key)
    return columns


def records_to_csv(records, stream):
    records = list(records)
    writer = csv.DictWriter(stream, fieldnames=_columns(records), restval='', lineterminator='\n')
    writer.writeheader()
    for record in records:
        writer.writerow({k: _cell(v) for k, v in record.items()})


def format_records(records, fmt='json'):
    if fmt == 'csv':
        buf = io.StringIO()
        records_to_csv(records, buf)
        return buf.getvalue()
    return ''.join(dump_record(r) + '\n' for r in records)


def read_records(path):
    """Result rows of a JSON-lines file, without the metadata header."""
    rows = []
    with open(path, encoding='utf-8') as f:
        for line in f:
            if line.strip():
                record = json.loads(line)
                if record.get('kind') != 'meta':
                    rows.append(record)
    return rows


def render_csv(jsonl_path, csv_path):
    rows = read_records(jsonl_path)
    with open(csv_path, 'w', encoding='utf-8', newline='') as f:
        records_to_csv(rows, f)
    return len(rows)


class ResultWriter:
    """Serialized sink for result rows. Write failures are logged and kept in
    ``errors``; the sweep goes on without the file."""

    def __init__(self, path, digest, config):
        self.path = Path(path)
        self.errors = []
        header = {
            'kind': 'meta',
            'digest': digest,
            'config': config,
            'created_at': timezone.now().isoformat(),
        }
        try:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with open(self.path, 'w', encoding='utf-8') as f:
                f.write(dump_record(header) + '\n')
        except OSError as e:
            self._failed(e)

    def _failed(self, error):
        message = f"{self.path}: {error}"
        logger.error(f"Cannot write results: {message}")
        self.errors.append(message)

    @property
    def ok(self):
        return not self.errors

    def write(self, record):
        if not self.ok:
            return
        try:
            with open(self.path, 'a', encoding='utf-8') as f:
                f.write(dump_record(record) + '\n')
        except OSError as e:
            self._failed(e)

    def render_csv(self, csv_path):
        if not self.ok:
            return
        try:
            render_csv(self.path, csv_path)
        except OSError as e:
            self.errors.append(f"{csv_path}: {e}")
            logger.error(f"Cannot render CSV: {csv_path}: {e}")

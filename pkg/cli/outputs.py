"""
Result files.

JSON documents carry {schema_version, config, results}; CSV files open with a
`# schema_version=1 config=<json>` comment line followed by the header. Keys
are sorted and no timestamps are written so reruns are byte-identical.
"""

import csv
import json
import logging
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence

import numpy as np

import settings
from mesh_complex import ValidationError
from .config import ExperimentConfig

logger = logging.getLogger(__name__)


def _plain(value):
    """JSON encoder hook for numpy scalars and arrays."""
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, Path):
        return str(value)
    raise TypeError(f"{type(value).__name__} is not JSON serializable")


def _cell(value) -> str:
    if value is None:
        return ''
    if isinstance(value, (bool, np.bool_)):
        return 'true' if value else 'false'
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.17g}"
    return str(value)


def dump_json(payload) -> str:
    return json.dumps(payload, indent=2, sort_keys=True, default=_plain) + "\n"


def write_json(path, config: ExperimentConfig, results: Dict[str, object]) -> Path:
    out = Path(path)
    out.parent.mkdir(parents=True, exist_ok=True)
    document = {'schema_version': settings.SCHEMA_VERSION, 'config': config.to_dict(), 'results': results}
    out.write_text(dump_json(document), encoding='utf-8')
    logger.info("|-- [OK] Wrote %s", out)
    return out


def write_csv(path, config: ExperimentConfig, rows: Iterable[Dict[str, object]],
              columns: Optional[Sequence[str]] = None) -> Path:
    """One row per mapping; column order is `columns` or the keys of the first row."""
    rows = list(rows)
    out = Path(path)
    out.parent.mkdir(parents=True, exist_ok=True)
    header: List[str] = list(columns) if columns else (list(rows[0]) if rows else [])
    with open(out, 'w', newline='', encoding='utf-8') as fh:
        fh.write(f"# schema_version={settings.SCHEMA_VERSION} config={config.to_json()}\n")
        writer = csv.writer(fh, lineterminator='\n')
        writer.writerow(header)
        for row in rows:
            writer.writerow([_cell(row.get(name)) for name in header])
    logger.info("|-- [OK] Wrote %s (%d rows)", out, len(rows))
    return out


def read_csv(path) -> Dict[str, object]:
    """Inverse of write_csv: {'schema_version', 'config', 'header', 'rows'} with string cells."""
    lines = Path(path).read_text(encoding='utf-8').splitlines()
    meta = lines[0]
    if not meta.startswith('# schema_version='):
        raise ValidationError(f"{path}: missing schema comment line", module='cli')
    version, _, config = meta[len('# schema_version='):].partition(' config=')
    reader = csv.reader(lines[1:])
    header = next(reader)
    return {
        'schema_version': int(version),
        'config': json.loads(config),
        'header': header,
        'rows': [dict(zip(header, row)) for row in reader],
    }

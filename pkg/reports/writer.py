"""
Report Writers
Canonical JSON and CSV output plus tabulate summaries for the terminal
"""

import csv
import io
import json
import logging
import os
from enum import Enum
from typing import Any, Dict, List, Sequence, Union

import numpy as np
from pydantic import BaseModel
from tabulate import tabulate

from config.constants import COVERING_SPECTRUM_FACTOR, FLOAT_DIGITS

logger = logging.getLogger(__name__)

EXPERIMENT_COLUMNS = ['i', 'target', 'scale', 'gh_lower', 'gh_upper', 'map_distortion',
                      'deck_rank', 'deck_torsion', 'error']
SPECTRUM_COLUMNS = ['value', 'multiplicity', 'certainty', 'error']


def canonical_float(x: float) -> float:
    """Round to FLOAT_DIGITS significant digits; -0.0 becomes 0.0"""
    value = float(f"{float(x):.{FLOAT_DIGITS}g}")
    return 0.0 if value == 0 else value


def canonical(data: Any) -> Any:
    """Plain JSON-ready structure with rounded floats"""
    if isinstance(data, BaseModel):
        return canonical(data.model_dump())
    if isinstance(data, Enum):
        return data.value
    if isinstance(data, dict):
        return {str(k): canonical(v) for k, v in data.items()}
    if isinstance(data, (list, tuple)):
        return [canonical(v) for v in data]
    if isinstance(data, (bool, np.bool_)):
        return bool(data)
    if isinstance(data, (int, np.integer)):
        return int(data)
    if isinstance(data, (float, np.floating)):
        return canonical_float(data)
    return data


def to_json(data: Union[BaseModel, Dict[str, Any]]) -> str:
    """Sorted keys, two-space indent, trailing newline"""
    return json.dumps(canonical(data), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _ensure_parent(path: str) -> None:
    parent = os.path.dirname(path)
    if parent:
        os.makedirs(parent, exist_ok=True)


def write_json(path: str, data: Union[BaseModel, Dict[str, Any]]) -> str:
    _ensure_parent(path)
    with open(path, 'w', encoding='utf-8', newline='\n') as f:
        f.write(to_json(data))
    logger.info(f"Wrote {path}")
    return path


def _cell(value: Any) -> str:
    value = canonical(value)
    if value is None:
        return ""
    if isinstance(value, list):
        return " ".join(str(v) for v in value)
    return str(value)


def to_csv(rows: Sequence[Dict[str, Any]], columns: Sequence[str]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(row.get(c)) for c in columns])
    return buffer.getvalue()


def write_csv(path: str, rows: Sequence[Dict[str, Any]], columns: Sequence[str] = EXPERIMENT_COLUMNS) -> str:
    _ensure_parent(path)
    with open(path, 'w', encoding='utf-8', newline='') as f:
        f.write(to_csv(rows, columns))
    logger.info(f"Wrote {path}")
    return path


def write_text(path: str, text: str) -> str:
    _ensure_parent(path)
    with open(path, 'w', encoding='utf-8', newline='\n') as f:
        f.write(text)
    logger.info(f"Wrote {path}")
    return path


# ----------------------------------------------------------------------
# Terminal summaries
# ----------------------------------------------------------------------

def spectrum_table(report: Dict[str, Any]) -> str:
    rows = [[e['value'], e['multiplicity'], COVERING_SPECTRUM_FACTOR * e['value'], e['certainty'], e['error']]
            for e in report['entries']]
    table = tabulate(rows, headers=['critical value', 'multiplicity', 'covering value', 'certainty', '+/-'],
                     floatfmt='.6g')
    if report.get('unresolved'):
        table += "\nunresolved clusters: " + ", ".join(f"[{a:.6g}, {b:.6g}]" for a, b in report['unresolved'])
    return table


def experiment_table(rows: List[Dict[str, Any]]) -> str:
    body = [[r['i'], r['target'], r['gh_lower'], r['gh_upper'], r['deck_rank'], r['deck_torsion']] for r in rows]
    return tabulate(body, headers=['i', 'target', 'GH lower', 'GH upper', 'deck rank', 'torsion'], floatfmt='.4g')


def demo_table(stages: List[Dict[str, Any]]) -> str:
    body = [[s['stage'], s['valency'], ", ".join(f"{v:.4g}" for v in s['critical_values'])] for s in stages]
    return tabulate(body, headers=['stage', 'valency', 'critical values above floor'])

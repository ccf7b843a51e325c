"""
decflow-cochain v1: text checkpoints of cochains.

    # decflow-cochain
    version 1
    degree <k>
    complex <sha256 tag of the complex>
    time <t>
    label <free text, single line>
    values <n>
    <one value per line, 17 significant digits>
"""

import logging
from pathlib import Path
from typing import Optional, Union

import numpy as np

from mesh_complex import CellComplex, CochainMismatchError, ValidationError
from .cochain import Cochain

logger = logging.getLogger(__name__)

MAGIC = '# decflow-cochain'
FORMAT_VERSION = 1


def write_cochain(path: Union[str, Path], cochain: Cochain, time: float = 0.0, label: str = '') -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    values = np.asarray(cochain.values, dtype=float)
    with open(path, 'w', encoding='utf-8') as fh:
        fh.write(f"{MAGIC}\n")
        fh.write(f"version {FORMAT_VERSION}\n")
        fh.write(f"degree {cochain.degree}\n")
        fh.write(f"complex {cochain.complex_tag}\n")
        fh.write(f"time {time:.17g}\n")
        fh.write(f"label {' '.join(label.split())}\n")
        fh.write(f"values {values.size}\n")
        if values.size:
            np.savetxt(fh, values, fmt='%.17g')
    return path


def read_cochain(path: Union[str, Path], complex: Optional[CellComplex] = None):
    """Returns (cochain, time, label); with `complex` given the tag and length are checked."""
    path = Path(path)
    try:
        lines = path.read_text(encoding='utf-8').splitlines()
    except OSError as exc:
        raise ValidationError(f"cannot read cochain file {path}: {exc}", module='dec_core') from exc
    if not lines or lines[0].strip() != MAGIC:
        raise ValidationError(f"{path} is not a decflow-cochain file", module='dec_core')
    header = {}
    cursor = 1
    while cursor < len(lines):
        key, _, rest = lines[cursor].partition(' ')
        header[key] = rest
        cursor += 1
        if key == 'values':
            break
    try:
        version = int(header['version'])
        degree = int(header['degree'])
        count = int(header['values'])
        time = float(header['time'])
    except (KeyError, ValueError) as exc:
        raise ValidationError(f"malformed cochain header in {path}: {exc}", module='dec_core') from exc
    if version != FORMAT_VERSION:
        raise ValidationError(f"unsupported cochain format version {version}", module='dec_core')
    body = lines[cursor:cursor + count]
    if len(body) != count:
        raise ValidationError(f"{path}: expected {count} values, found {len(body)}", module='dec_core')
    values = np.array([float(x) for x in body], dtype=float)
    tag = header.get('complex', '').strip()
    if complex is not None:
        if tag != complex.tag:
            raise CochainMismatchError(f"{path} belongs to complex {tag}, not {complex.tag}")
        if count != complex.n_dual[degree]:
            raise CochainMismatchError(f"{path} has {count} values, complex expects {complex.n_dual[degree]}")
    return Cochain(values, degree, tag), time, header.get('label', '')

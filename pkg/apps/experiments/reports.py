"""
CSV curves: '.' decimals, LF line endings, reals with six decimals.
"""

import csv
import io
from fractions import Fraction

from sp_recon.exceptions import ConfigError

COLUMNS = (
    "p_err",
    "n",
    "k",
    "s",
    "p",
    "R",
    "frames",
    "frame_errors",
    "fer",
    "leak_bits",
    "f_code",
    "f_orig",
    "key_bound_bits",
    "seed",
    "status",
)


def format_cell(value):
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, int):
        return str(value)
    if isinstance(value, (float, Fraction)):
        return f"{float(value):.6f}"
    return str(value)


def row_cells(row):
    return {
        "p_err": row.p_err,
        "n": row.n,
        "k": row.k,
        "s": row.s,
        "p": row.p,
        "R": row.rate,
        "frames": row.frames,
        "frame_errors": row.frame_errors,
        "fer": row.fer,
        "leak_bits": row.leak_bits,
        "f_code": row.f_code,
        "f_orig": row.f_orig,
        "key_bound_bits": row.key_bound_bits,
        "seed": row.master_seed,
        "status": row.status,
    }


def render_csv(rows):
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(COLUMNS)
    for row in rows:
        cells = row_cells(row)
        writer.writerow([format_cell(cells[column]) for column in COLUMNS])
    return buffer.getvalue()


def write_csv(rows, path):
    text = render_csv(rows)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    return text


def read_csv(path):
    """Rows of a written report as dicts of strings."""
    try:
        with open(path, encoding="utf-8", newline="") as fh:
            reader = csv.DictReader(fh)
            if tuple(reader.fieldnames or ()) != COLUMNS:
                raise ConfigError({"report": [f"{path} is not a reconciliation report"]})
            return list(reader)
    except FileNotFoundError:
        raise ConfigError({"report": [f"report not found: {path}"]})


def optional_float(cell):
    return float(cell) if cell not in ("", None) else None

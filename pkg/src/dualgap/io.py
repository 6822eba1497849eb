"""Deterministic text output: number formatting, CSV and atomic writes."""
import csv
import io
import os
import tempfile
from pathlib import Path

OUTPUT_DIR_ENV = "DUALGAP_OUTPUT_DIR"


def fmt(value):
    """9 significant digits, lowercase exponent; booleans as true/false."""
    if isinstance(value, (bool,)):
        return "true" if value else "false"
    if isinstance(value, str):
        return value
    v = float(value)
    if v == 0.0:
        v = 0.0  # drop the sign of -0.0
    return f"{v:.9g}"


def resolve_output(path):
    """Relative output paths land under $DUALGAP_OUTPUT_DIR when it is set."""
    p = Path(path)
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base and not p.is_absolute():
        p = Path(base) / p
    return p


def atomic_write_text(path, text):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def csv_text(header, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) for v in row])
    return buf.getvalue()


def write_csv(path, header, rows):
    return atomic_write_text(path, csv_text(header, rows))


def read_columns(path, n_columns=2):
    """Read a numeric CSV with a header row; returns (header, list of columns)."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        cols = [[] for _ in range(n_columns)]
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) < n_columns:
                raise ValueError(f"{path}:{lineno}: expected {n_columns} columns")
            for c in range(n_columns):
                cols[c].append(float(row[c]))
    return header, cols

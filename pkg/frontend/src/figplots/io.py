"""Readers for the CSV files the spectral CLI emits, and the error types.

Every figure in this package is drawn from files produced by the
``ugwspectra`` command line tool; nothing numerical is recomputed here.
Loaders validate headers strictly so a column mix-up fails loudly instead
of plotting nonsense.
"""

from pathlib import Path

import numpy as np


class FigplotsError(Exception):
    pass


class SchemaError(FigplotsError, ValueError):
    """Input file does not match the expected CLI schema."""


class EmptyInput(FigplotsError, ValueError):
    """Input holds too little data to draw the requested figure."""


def _read_csv(path):
    """Split a CLI CSV into (comments dict, header, float rows)."""
    comments = {}
    header = None
    rows = []
    text = Path(path).read_text()
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line.lstrip("# ")
            if "=" in body:
                k, _, v = body.partition("=")
                comments[k.strip()] = v.strip()
            continue
        if header is None:
            header = line
            continue
        rows.append([float(x) for x in line.split(",")])
    if header is None:
        raise SchemaError(f"{path}: no header line found")
    return comments, header, rows


def load_eigenvalues(path) -> np.ndarray:
    """Eigenvalue column from a ``spectrum`` CSV."""
    _, header, rows = _read_csv(path)
    if header != "lambda":
        raise SchemaError(f"{path}: expected header 'lambda', got {header!r}")
    if not rows:
        raise EmptyInput(f"{path}: no eigenvalues")
    return np.array([r[0] for r in rows])


def load_locus(path):
    """(c, q) columns from a ``locus`` CSV, in file order."""
    _, header, rows = _read_csv(path)
    if header != "c,q":
        raise SchemaError(f"{path}: expected header 'c,q', got {header!r}")
    if not rows:
        raise EmptyInput(f"{path}: no locus rows")
    arr = np.array(rows)
    return arr[:, 0], arr[:, 1]


def load_km_curve(path):
    """(lambda, density, d) from a ``kmcurve`` CSV.

    The degree travels in the file's ``# d=...`` comment; figures need it
    for labels and for the support check, and reading it from the file
    keeps the single-source-of-truth rule intact.
    """
    comments, header, rows = _read_csv(path)
    if header != "lambda,density,cdf":
        raise SchemaError(
            f"{path}: expected header 'lambda,density,cdf', got {header!r}")
    if "d" not in comments:
        raise SchemaError(f"{path}: missing '# d=...' comment")
    d = int(float(comments["d"]))
    if d < 2:
        raise SchemaError(f"{path}: degree must be >= 2, got {d}")
    if not rows:
        raise EmptyInput(f"{path}: no curve rows")
    arr = np.array(rows)
    return arr[:, 0], arr[:, 1], d


def output_pair(out):
    """PNG and SVG paths for a requested output location.

    ``out`` may end in .png or .svg or carry no suffix at all; the figure
    is always written in both formats next to each other.
    """
    p = Path(out)
    stem = p.with_suffix("") if p.suffix.lower() in (".png", ".svg") else p
    return stem.with_suffix(".png"), stem.with_suffix(".svg")

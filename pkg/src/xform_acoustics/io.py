"""Deterministic CSV/JSON writers (17 significant digits, lower-case exponent)."""

import json

import numpy as np


def fmt(value):
    return format(float(value), ".16e")


def _write_rows(path, header, columns):
    lines = [",".join(header)]
    for row in zip(*columns):
        lines.append(",".join(fmt(v) for v in row))
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def write_field_csv(field, path):
    """Columns ``x,y,re,im``, row-major over the grid (x index outermost)."""
    X, Y = field.grid.coordinates()
    v = field.values
    _write_rows(path, ["x", "y", "re", "im"],
                [X.ravel(), Y.ravel(), v.real.ravel(), v.imag.ravel()])


def write_params_csv(params, path):
    """``params`` maps column name to an ``(nx, ny)`` array; order is preserved."""
    _write_rows(path, list(params), [np.asarray(c).ravel() for c in params.values()])


def _emit(obj, indent):
    pad = "  " * (indent + 1)
    end = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_emit(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        return "[\n" + ",\n".join(pad + _emit(v, indent + 1) for v in obj) + "\n" + end + "]"
    if obj is None or isinstance(obj, (bool, np.bool_)):
        return json.dumps(None if obj is None else bool(obj))
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return fmt(obj) if np.isfinite(obj) else "null"
    return json.dumps(obj)


def dumps(obj):
    """Indented JSON with every float written by :func:`fmt`."""
    return _emit(obj, 0) + "\n"


def write_json(obj, path):
    with open(path, "w", newline="\n") as fh:
        fh.write(dumps(obj))

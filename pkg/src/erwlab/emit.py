"""Deterministic CSV/JSON writers shared by the CLI.

Floats are serialised with 17 significant digits so doubles round-trip
exactly; metadata lines are '#'-prefixed and key-sorted so identical
configs produce byte-identical files.
"""

import json
import sys
from contextlib import contextmanager


def fmt(value):
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return f"{value:.17g}"
    if value is None:
        return ""
    return str(value)


@contextmanager
def open_out(path):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            yield fh


def write_csv(path, header, rows, meta=None):
    with open_out(path) as fh:
        for key in sorted(meta or {}):
            fh.write(f"# {key}={fmt(meta[key])}\n")
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(fmt(v) for v in row) + "\n")


def write_json(path, obj, meta=None):
    payload = dict(obj)
    if meta:
        payload["_meta"] = {k: meta[k] for k in sorted(meta)}
    with open_out(path) as fh:
        json.dump(payload, fh, indent=2, sort_keys=True, default=fmt)
        fh.write("\n")

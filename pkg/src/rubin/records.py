"""Sweep records and their CSV / JSON encodings.

Floats are written with 17 significant digits so that a record survives a
write/read round trip bit for bit.  The CSV dialect is fixed (comma, header
row, ``.`` decimal point) and independent of the locale.
"""
import csv
import io
import json
import math

__all__ = ["SweepRecord", "write_records", "read_records", "format_value"]

# columns holding lists of floats, joined with ';' in CSV
LIST_COLUMNS = frozenset({"t_samples"})
TEXT_COLUMNS = frozenset({"flags", "error", "version", "mode"})
INT_COLUMNS = frozenset({"N", "n_samples"})


class SweepRecord:
    """One sweep point: inputs, outputs and provenance, in column order."""

    def __init__(self, columns, values=None):
        self.columns = list(columns)
        self.values = {c: None for c in self.columns}
        if values:
            for k, v in values.items():
                if k not in self.values:
                    raise KeyError(f"unknown column {k!r}")
                self.values[k] = v

    def __getitem__(self, key):
        return self.values[key]

    def __setitem__(self, key, value):
        if key not in self.values:
            raise KeyError(f"unknown column {key!r}")
        self.values[key] = value

    def get(self, key, default=None):
        return self.values.get(key, default)

    @property
    def failed(self):
        return bool(self.values.get("error"))

    def is_finite(self):
        for k, v in self.values.items():
            if isinstance(v, float) and not math.isfinite(v):
                return False
        return True

    def as_dict(self):
        return {c: self.values[c] for c in self.columns}

    def __eq__(self, other):
        if not isinstance(other, SweepRecord):
            return NotImplemented
        return self.columns == other.columns and _same(self.values, other.values)

    def __repr__(self):
        return f"SweepRecord({self.as_dict()!r})"


def _same(a, b):
    for k in a:
        x, y = a[k], b[k]
        if isinstance(x, float) and isinstance(y, float) and math.isnan(x) and math.isnan(y):
            continue
        if x != y:
            return False
    return True


def format_value(v):
    if v is None:
        return ""
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, float):
        return format(v, ".17g")
    if isinstance(v, (list, tuple)):
        return ";".join(format_value(x) for x in v)
    return str(v)


def _parse(column, text):
    if column in TEXT_COLUMNS:
        return text
    if text == "":
        return None
    if column in LIST_COLUMNS:
        return [float(x) for x in text.split(";")]
    if column in INT_COLUMNS:
        return int(text)
    return float(text)


def _json_value(v):
    if isinstance(v, float) and not math.isfinite(v):
        return format_value(v)
    return v


def write_records(records, fmt="csv", stream=None):
    """Serialise ``records`` (all sharing one column list) and return the text."""
    records = list(records)
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        if records:
            writer.writerow(records[0].columns)
        for r in records:
            writer.writerow([format_value(r.values[c]) for c in r.columns])
        text = buf.getvalue()
    elif fmt == "json":
        # repr() of a float is its shortest round-trip form
        text = json.dumps([{c: _json_value(r.values[c]) for c in r.columns} for r in records],
                          indent=1) + "\n"
    else:
        raise ValueError(f"unknown format {fmt!r}")
    if stream is not None:
        stream.write(text)
    return text


def read_records(text, fmt="csv"):
    if fmt == "csv":
        rows = list(csv.reader(io.StringIO(text)))
        if not rows:
            return []
        header = rows[0]
        return [SweepRecord(header, {c: _parse(c, x) for c, x in zip(header, row)})
                for row in rows[1:]]
    if fmt == "json":
        out = []
        for obj in json.loads(text):
            values = {}
            for c, v in obj.items():
                if isinstance(v, str) and c not in TEXT_COLUMNS:
                    v = float(v)
                elif isinstance(v, int) and c not in INT_COLUMNS and not isinstance(v, bool):
                    v = float(v)
                values[c] = v
            out.append(SweepRecord(list(obj), values))
        return out
    raise ValueError(f"unknown format {fmt!r}")

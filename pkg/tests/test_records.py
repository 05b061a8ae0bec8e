import math

import pytest

from rubin.records import SweepRecord, format_value, read_records, write_records

COLUMNS = ["gamma", "T", "negativity", "N", "t_samples", "version", "flags", "error"]


def sample():
    return [
        SweepRecord(COLUMNS, {"gamma": 0.6, "T": 1 / 3, "negativity": 0.1 + 0.2, "N": 200,
                              "t_samples": [16.666666666666668, 26.7], "version": "0.1.0",
                              "flags": "a;b", "error": ""}),
        SweepRecord(COLUMNS, {"gamma": 0.9, "T": 1e-300, "negativity": math.nan, "N": 200,
                              "t_samples": [1.0], "version": "0.1.0", "flags": "",
                              "error": "StabilityError: x, y"}),
    ]


@pytest.mark.parametrize("fmt", ["csv", "json"])
def test_round_trip_is_exact(fmt):
    recs = sample()
    back = read_records(write_records(recs, fmt), fmt)
    assert back == recs
    assert write_records(back, fmt) == write_records(recs, fmt)


def test_csv_layout():
    text = write_records(sample(), "csv")
    lines = text.split("\n")
    assert lines[0] == ",".join(COLUMNS)
    assert lines[1].startswith("0.59999999999999998,0.33333333333333331,")
    assert "\r" not in text


def test_record_api():
    r = sample()[1]
    assert r.failed and not r.is_finite()
    assert not sample()[0].failed
    with pytest.raises(KeyError):
        r["nope"] = 1
    with pytest.raises(KeyError):
        SweepRecord(["a"], {"b": 1})
    assert list(r.as_dict()) == COLUMNS


def test_format_value():
    assert format_value(None) == ""
    assert format_value(True) == "1"
    assert format_value([0.5, 2.0]) == "0.5;2"
    with pytest.raises(ValueError):
        write_records(sample(), "xml")

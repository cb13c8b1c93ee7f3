import numpy as np
import pytest
from hypothesis import given, strategies as st

from discdiv.io import digest, fmt, metadata_header, parse_bool, read_table, strip_timestamp, write_table


@given(st.floats(allow_nan=False, allow_infinity=False))
def test_floats_roundtrip_exactly(x):
    assert float(fmt(x)) == x


def test_fmt_scalars():
    assert [fmt(True), fmt(np.bool_(False)), fmt(np.int64(3)), fmt(np.float64(0.1))] == ["true", "false", "3", "0.1"]


def test_parse_bool():
    assert parse_bool(" Yes ") and not parse_bool("off")
    with pytest.raises(ValueError):
        parse_bool("maybe")


def test_header_and_table(tmp_path):
    meta = {"tool": "discdiv 0.1.0", "seed": 4, "config_digest": "abc", "created": "2020-01-01T00:00:00+00:00"}
    lines = metadata_header(meta)
    assert lines[-1] == "# created: 2020-01-01T00:00:00+00:00"
    path = write_table(tmp_path / "sub" / "t.csv", ["a", "b"], [(1, 0.5), ("x,y", True)], meta)
    assert read_table(path) == (["a", "b"], [["1", "0.5"], ["x,y", "true"]])
    assert "created" not in strip_timestamp(path.read_text())


def test_digest_is_order_independent():
    assert digest({"a": 1, "b": 2.0}) == digest({"b": 2.0, "a": 1})
    assert digest({"a": 1}) != digest({"a": 2})
    assert len(digest({})) == 16

import numpy as np
from hypothesis import given
from hypothesis import strategies as st

from spinboson.dynamics import BlochTrajectory
from spinboson.io import (TRAJECTORY_HEADER, fmt, read_csv, write_json, write_svg,
                          write_trajectory_csv)
from spinboson.model import ModelParams


@given(st.floats(allow_nan=False, allow_infinity=False))
def test_float_round_trip(x):
    assert float(fmt(x)) == x


def test_trajectory_csv_schema(tmp_path):
    t = np.linspace(0, 1, 3)
    tr = BlochTrajectory(t, t * 0, t * 0.5, 1 - t, "full", ModelParams(0.1, 0.1))
    path = write_trajectory_csv(tmp_path / "a.csv", tr)
    header, rows = read_csv(path)
    assert tuple(header) == TRAJECTORY_HEADER
    assert rows[1] == ["0.5", "0.0", "0.25", "0.5", "full"]


def test_json_has_schema_version(tmp_path):
    import json
    p = write_json(tmp_path / "x.json", {"v": np.float64(np.nan), "n": np.int64(3)})
    body = json.loads(p.read_text())
    assert body == {"schema_version": 1, "v": None, "n": 3}


def test_svg_is_deterministic(tmp_path):
    s = [("a", [0, 1, 2], [0, 1, 0])]
    a = write_svg(tmp_path / "a.svg", s, "t").read_bytes()
    b = write_svg(tmp_path / "b.svg", s, "t").read_bytes()
    assert a == b and a.startswith(b"<svg")

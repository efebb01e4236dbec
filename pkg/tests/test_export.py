import json
import math

import numpy as np
import pytest

from compass_cqed.export import fmt, read_grid_csv, write_csv, write_grid_csv, write_json
from compass_cqed.states import compass
from compass_cqed.wigner import GridSpec, wigner_grid


def test_seventeen_digits_round_trip():
    for v in (math.pi, 1 / 3, -2.5e-300, 1e22, 0.1):
        assert float(fmt(v)) == v


def test_csv_layout(tmp_path):
    path = write_csv(tmp_path / "a.csv", ("u", "v"), (np.array([1.0, 2.0]), np.array([0.1, -3.0])))
    assert path.read_text() == "u,v\n1,0.10000000000000001\n2,-3\n"


def test_csv_rejects_ragged(tmp_path):
    with pytest.raises(ValueError):
        write_csv(tmp_path / "a.csv", ("u", "v"), (np.zeros(2), np.zeros(3)))


def test_grid_round_trip(tmp_path):
    g = wigner_grid(compass(1.0), GridSpec(-2.0, 2.0, -1.0, 1.0, 9, 5))
    path = write_grid_csv(g, tmp_path / "g.csv")
    lines = path.read_text().splitlines()
    assert lines[0] == "x,p,w"
    # x is the outer loop
    assert lines[1].startswith("-2,-1,") and lines[2].startswith("-2,-0.5,")
    back = read_grid_csv(path)
    assert np.array_equal(back.values, g.values)
    assert np.array_equal(back.x, g.x) and np.array_equal(back.p, g.p)


def test_json_sidecar(tmp_path):
    path = write_json(tmp_path / "m.json", {"b": np.float64(1.5), "a": [np.int64(2), math.inf], "c": np.bool_(True)})
    text = path.read_text(encoding="utf-8")
    assert json.loads(text) == {"a": [2, None], "b": 1.5, "c": True}
    assert text.index('"a"') < text.index('"b"')

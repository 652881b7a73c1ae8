import json

import numpy as np
from hypothesis import given
from hypothesis import strategies as st

from rmmsim import io

floats = st.floats(0, 1e6, allow_nan=False, allow_infinity=False)


@given(st.lists(floats, max_size=20))
def test_vector_round_trips_are_exact(v):
    assert io.vector_from_json(io.vector_to_json(v)).tolist() == [float(a) for a in v]
    assert io.vector_from_csv(io.vector_to_csv(v)).tolist() == [float(a) for a in v]


def test_rows_csv_and_json_mirror_each_other():
    rows = [
        {"name": "a", "value": np.float64(0.1), "ok": np.bool_(True), "n": np.int64(3), "v": [1.0, 0.5]},
        {"name": "b", "value": 2.0, "ok": False, "n": 4, "v": []},
    ]
    text = io.rows_to_csv(rows)
    assert text.splitlines() == ["name,value,ok,n,v", "a,0.1,true,3,1.0;0.5", "b,2.0,false,4,"]
    back = json.loads(io.rows_to_json(rows))
    assert [list(r) for r in back] == [list(rows[0]), list(rows[1])]
    assert back[0]["value"] == 0.1 and back[0]["ok"] is True
    assert io.rows_to_csv([]) == ""


def test_write_output(tmp_path, capsys):
    path = tmp_path / "out.csv"
    io.write_output("x\n", str(path))
    assert path.read_text() == "x\n"
    io.write_output("y\n", "-")
    assert capsys.readouterr().out == "y\n"

import json

import numpy as np

from classify import Verdict
from reports.common import SCHEMA, Check, build_envelope, dumps, encode_complex, sanitize
from reports.tables import decay_table, pick_table, symbol_table


def test_sanitize_plain_values():
    data = sanitize({
        "inf": float("inf"),
        "ninf": np.float64("-inf"),
        "nan": float("nan"),
        "count": np.int64(3),
        "flag": np.bool_(True),
        "verdict": Verdict.BORCHERS,
        "z": 1 + 2j,
        "pair": (1.5, 2),
    })
    assert data["inf"] == "inf"
    assert data["ninf"] == "-inf"
    assert data["nan"] == "nan"
    assert data["count"] == 3 and type(data["count"]) is int
    assert data["flag"] is True
    assert data["verdict"] == Verdict.BORCHERS.value
    assert data["z"] == {"re": 1.0, "im": 2.0}
    assert data["pair"] == [1.5, 2]


def test_sanitize_complex_matrix_and_vector():
    m = np.array([[1 + 1j, 0], [0, 2]])
    assert sanitize(m) == {"re": [[1.0, 0.0], [0.0, 2.0]], "im": [[1.0, 0.0], [0.0, 0.0]]}
    assert sanitize(np.array([1j, 2.0 + 0j])) == [encode_complex(1j), encode_complex(2.0)]
    assert sanitize(np.array([1.0, 2.0])) == [1.0, 2.0]


def test_check_round_trips_through_sanitize():
    c = Check("gram", 1e-3, 1e-9, True)
    assert sanitize(c) == {"name": "gram", "value": 1e-3, "threshold": 1e-9, "passed": True}


def test_envelope_all_passed_follows_checks():
    ok = build_envelope("integrals", 0, [Check("a", 0.0, 1.0, True)], {}, {"command": "integrals"})
    bad = build_envelope("integrals", 0, [Check("a", 0.0, 1.0, True), Check("b", None, None, False)], {}, {})
    assert ok["schema"] == SCHEMA
    assert ok["all_passed"]
    assert not bad["all_passed"]
    assert ok["errors"] == [] and ok["verdicts"] == {}
    assert "wall_time" not in ok
    assert build_envelope("gram", 1, [], {}, {}, wall_time=0.1234567)["wall_time"] == 0.123457


def test_dumps_is_deterministic_and_sorted():
    report = {"b": 1, "a": {"z": np.float64(0.5), "y": [np.inf]}}
    text = dumps(report)
    assert text == dumps(dict(reversed(list(report.items()))))
    assert text.endswith("\n")
    assert list(json.loads(text)) == ["a", "b"]
    assert json.loads(text)["a"]["y"] == ["inf"]


def test_table_headers_match_rows():
    r = np.array([[0.0 + 0j]])
    i = np.array([[1.0 + 0j]])
    header, rows = pick_table([(1.0, r, i), (2.0, r, -i)], 1)
    assert header == ["x", "r_00_re", "r_00_im", "i_00_re", "i_00_im"]
    assert rows[1] == [2.0, 0.0, 0.0, -1.0, 0.0]

    values = np.stack([1j * np.eye(2)] * 3)
    header, rows = symbol_table([-1.0, 0.5, 1.0], values)
    assert len(header) == 1 + 2 * 4
    assert all(len(row) == len(header) for row in rows)

    header, rows = decay_table([0.0, 1.0], [1.0, 0.5])
    assert header == ["t", "outgoing_norm"]
    assert rows == [[0.0, 1.0], [1.0, 0.5]]

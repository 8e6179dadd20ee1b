from fractions import Fraction

import pytest

from partialsp.core import make_profile, unit_setting
from partialsp.psp import maximality_counterexample
from partialsp.serialize import TableParseError, fmt, load_table, parse_r, parse_rational, read_json, save_table, write_json

F = Fraction


def test_rationals():
    assert parse_rational("3/9") == F(1, 3) and parse_rational(" -2 ") == -2 and parse_rational(4) == 4
    assert fmt(F(2, 4)) == "1/2" and fmt(3) == "3/1"
    for bad in ("0.5", "1/0", "a/b", 0.5, True):
        with pytest.raises(ValueError):
            parse_rational(bad)
    assert parse_r("0.34") == F(17, 50) and parse_r("1e-6") == F(1, 10**6)


def test_ivan_round_trip(ivan_path, tmp_path):
    table = load_table(read_json(ivan_path))
    assert table.partial and table.name == "ivan"
    out = tmp_path / "t.json"
    write_json(out, save_table(table))
    assert load_table(read_json(out)) == table


def test_keyed_round_trip(s3):
    table = maximality_counterexample(s3, F(1, 3), [2, 1, 0], agent=2)
    back = load_table(save_table(table))
    assert back == table and back.keyed_by == (2,)
    prof = make_profile(s3, ["abc", "bca", "bac"])
    assert back.allocate(s3, prof) == table.allocate(s3, prof)


def _doc(**over):
    doc = {
        "setting": {"n": 1, "objects": ["a", "b"], "q": [1, 1]},
        "entries": [{"profile": [["a", "b"]], "allocation": [["1/2", "1/2"]]}],
    }
    doc.update(over)
    return doc


@pytest.mark.parametrize(
    "doc,where",
    [
        (_doc(setting={"n": 1, "objects": ["a", "b"]}), "setting"),
        (_doc(entries=[{"profile": [["a", "c"]], "allocation": [["1/2", "1/2"]]}]), r"entries\[0\].profile"),
        (_doc(entries=[{"profile": [["a", "b"]], "allocation": [["1/2", "0.5"]]}]), r"entries\[0\].allocation"),
        (_doc(entries=[{"profile": [["a", "b"]], "allocation": [["1/2", "1/3"]]}]), r"entries\[0\].allocation"),
        (_doc(default=[["2", "-1"]]), "default"),
        (_doc(keyed_by=[3]), "keyed_by"),
    ],
)
def test_parse_errors_name_the_field(doc, where):
    with pytest.raises(TableParseError, match=where):
        load_table(doc)


def test_setting_dict_round_trip():
    s = unit_setting(3)
    assert load_table({"setting": s.to_dict(), "default": [["1/3"] * 3] * 3}).setting == s

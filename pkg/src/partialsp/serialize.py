"""JSON documents: settings, table mechanisms, reports. Rationals travel as "p/q"."""
from __future__ import annotations

import json
import re
from fractions import Fraction
from pathlib import Path

from .core import Allocation, InvalidAllocation, InvalidPreference, InvalidSetting, Setting

_RATIONAL = re.compile(r"^\s*(-?\d+)\s*(?:/\s*(\d+)\s*)?$")


class TableParseError(ValueError):
    pass


def fmt(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(text) -> Fraction:
    """Parse ``"p/q"`` (or an integer) exactly; floats are rejected."""
    if isinstance(text, bool) or not isinstance(text, (str, int)):
        raise ValueError(f"rational must be a 'p/q' string, got {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    m = _RATIONAL.match(text)
    if not m:
        raise ValueError(f"malformed rational {text!r}")
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return Fraction(int(m.group(1)), den)


def parse_r(text) -> Fraction:
    """Bound parser for user input: accepts "1/3", "0.34", "1e-6"."""
    if isinstance(text, Fraction):
        return text
    try:
        return parse_rational(text)
    except ValueError:
        return Fraction(str(text))


def setting_from_dict(d: dict) -> Setting:
    try:
        return Setting(int(d["n"]), tuple(map(str, d["objects"])), tuple(d["q"]), tuple(d.get("dummies", ())))
    except KeyError as exc:
        raise InvalidSetting(f"setting document missing {exc}") from None


def allocation_to_json(alloc: Allocation) -> list:
    return [[fmt(x) for x in row] for row in alloc.probs]


def _allocation(doc, setting: Setting, where: str) -> Allocation:
    try:
        rows = [[parse_rational(x) for x in row] for row in doc]
        return Allocation(rows).validate(setting)
    except (ValueError, TypeError, InvalidAllocation) as exc:
        raise TableParseError(f"{where}: {exc}") from None


def save_table(table) -> dict:
    doc = {
        "setting": table.setting.to_dict(),
        "anonymous": table.anonymous,
        "entries": [
            {"profile": [list(t.ranking) for t in prof], "allocation": allocation_to_json(alloc)}
            for prof, alloc in table.entries.items()
        ],
    }
    if table.default is not None:
        doc["default"] = allocation_to_json(table.default)
    if table.name != "table":
        doc["name"] = table.name
    if table.keyed_by is not None:
        doc["keyed_by"] = list(table.keyed_by)
    return doc


def load_table(doc: dict):
    from .mechanisms import TableMechanism, parse_key

    try:
        setting = setting_from_dict(doc["setting"])
    except (KeyError, TypeError, InvalidSetting) as exc:
        raise TableParseError(f"setting: {exc}") from None
    keyed_by = doc.get("keyed_by")
    if keyed_by is not None:
        if not isinstance(keyed_by, list) or not all(
            isinstance(i, int) and 0 <= i < setting.n for i in keyed_by
        ) or not keyed_by:
            raise TableParseError(f"keyed_by: expected a list of agent indices, got {keyed_by!r}")
        keyed_by = tuple(keyed_by)
    width = setting.n if keyed_by is None else len(keyed_by)
    entries = {}
    for k, entry in enumerate(doc.get("entries", [])):
        try:
            prof = parse_key(setting, entry["profile"], width)
        except (KeyError, TypeError, InvalidPreference) as exc:
            raise TableParseError(f"entries[{k}].profile: {exc}") from None
        entries[prof] = _allocation(entry.get("allocation"), setting, f"entries[{k}].allocation")
    default = None
    if doc.get("default") is not None:
        default = _allocation(doc["default"], setting, "default")
    return TableMechanism(
        setting,
        entries,
        default,
        anonymous=bool(doc.get("anonymous", False)),
        name=doc.get("name", "table"),
        keyed_by=keyed_by,
    )


def read_json(path) -> dict:
    return json.loads(Path(path).read_text())


def write_json(path, doc) -> None:
    Path(path).write_text(json.dumps(doc, indent=2) + "\n")

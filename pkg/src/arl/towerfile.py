"""Tower description files (extension .arl.json).

A file declares a prime, named groups (invariant factors plus optional
operator matrices), named homs, named modules in the ``Zl^r + Z/l^a`` text
form, and towers assembled from those pieces with an explicit tail rule.
Everything is validated on load; diagnostics carry the offending name and,
for matrices, the row and column.

Example::

    {
      "format": 1,
      "l": 2,
      "symbols": ["h", "d1", "d2"],
      "groups": {"A0": {"factors": [2]}, "A1": {"factors": [4]}},
      "homs": {"u1": {"source": "A1", "target": "A0", "matrix": [[1]]}},
      "modules": {"M": "Zl^1"},
      "towers": {
        "T": {"levels": ["A0", "A1"], "maps": ["u1"],
               "tail": {"kind": "eventually-l-adic", "start": 0, "module": "M"}}
      }
    }
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .errors import TowerFileError
from .groups import FinAbGroup, GroupHom
from .intmat import IntMatrix
from .towers import EventuallyLAdic, Tower, Truncated, ZeroTail
from .zlmod import ZlModule


@dataclass
class TowerFile:
    l: int
    groups: dict[str, FinAbGroup] = field(default_factory=dict)
    homs: dict[str, GroupHom] = field(default_factory=dict)
    modules: dict[str, ZlModule] = field(default_factory=dict)
    towers: dict[str, Tower] = field(default_factory=dict)
    symbols: tuple[str, ...] = ("h", "d1", "d2")

    def tower(self, name: str) -> Tower:
        if name not in self.towers:
            raise TowerFileError(
                f"no tower named {name!r}; available: {sorted(self.towers)}")
        return self.towers[name]


def _require(cond: bool, message: str):
    if not cond:
        raise TowerFileError(message)


def _parse_matrix(data, what: str, rows: int, cols: int) -> IntMatrix:
    _require(isinstance(data, list), f"{what}: matrix must be a list of rows")
    _require(len(data) == rows, f"{what}: expected {rows} rows, got {len(data)}")
    out = []
    for i, row in enumerate(data):
        _require(isinstance(row, list), f"{what}: row {i} is not a list")
        _require(len(row) == cols, f"{what}: row {i} has {len(row)} entries, expected {cols}")
        clean = []
        for j, x in enumerate(row):
            if not isinstance(x, int) or isinstance(x, bool):
                raise TowerFileError(f"{what}: matrix row {i} col {j}: expected integer, got {x!r}")
            clean.append(x)
        out.append(clean)
    return IntMatrix.from_rows(out, cols=cols)


def load_tower_data(data: dict) -> TowerFile:
    _require(isinstance(data, dict), "top level must be an object")
    _require(data.get("format") == 1, "unsupported or missing format (expected 1)")
    l = data.get("l")
    _require(isinstance(l, int) and l >= 2, "missing or invalid prime 'l'")

    tf = TowerFile(l=l)
    if "symbols" in data:
        _require(isinstance(data["symbols"], list), "'symbols' must be a list")
        tf.symbols = tuple(str(s) for s in data["symbols"])

    for name, spec in (data.get("modules") or {}).items():
        try:
            tf.modules[name] = ZlModule.parse(str(spec), l)
        except ValueError as exc:
            raise TowerFileError(f"module {name!r}: {exc}") from exc

    for name, spec in (data.get("groups") or {}).items():
        _require(isinstance(spec, dict), f"group {name!r}: must be an object")
        factors = spec.get("factors")
        _require(isinstance(factors, list), f"group {name!r}: missing 'factors' list")
        try:
            group = FinAbGroup(tuple(int(d) for d in factors), prime_support=l)
        except ValueError as exc:
            raise TowerFileError(f"group {name!r}: {exc}") from exc
        ops = spec.get("operators") or {}
        if ops:
            try:
                group = group.with_operators({
                    label: _parse_matrix(mat, f"group {name!r} operator {label!r}",
                                         group.rank, group.rank)
                    for label, mat in ops.items()
                })
            except ValueError as exc:
                raise TowerFileError(f"group {name!r}: {exc}") from exc
        tf.groups[name] = group

    for name, spec in (data.get("homs") or {}).items():
        _require(isinstance(spec, dict), f"hom {name!r}: must be an object")
        for key in ("source", "target", "matrix"):
            _require(key in spec, f"hom {name!r}: missing {key!r}")
        _require(spec["source"] in tf.groups, f"hom {name!r}: unknown source group {spec['source']!r}")
        _require(spec["target"] in tf.groups, f"hom {name!r}: unknown target group {spec['target']!r}")
        src = tf.groups[spec["source"]]
        tgt = tf.groups[spec["target"]]
        mat = _parse_matrix(spec["matrix"], f"hom {name!r}", tgt.rank, src.rank)
        try:
            tf.homs[name] = GroupHom(src, tgt, mat)
        except ValueError as exc:
            raise TowerFileError(f"hom {name!r}: {exc}") from exc

    for name, spec in (data.get("towers") or {}).items():
        _require(isinstance(spec, dict), f"tower {name!r}: must be an object")
        level_names = spec.get("levels")
        _require(isinstance(level_names, list) and level_names,
                 f"tower {name!r}: needs a nonempty 'levels' list")
        map_names = spec.get("maps", [])
        _require(len(map_names) == len(level_names) - 1,
                 f"tower {name!r}: needs exactly {len(level_names) - 1} maps")
        groups = []
        for gname in level_names:
            _require(gname in tf.groups, f"tower {name!r}: unknown group {gname!r}")
            groups.append(tf.groups[gname])
        maps = []
        for mname in map_names:
            _require(mname in tf.homs, f"tower {name!r}: unknown hom {mname!r}")
            maps.append(tf.homs[mname])
        tail_spec = spec.get("tail", {"kind": "truncated"})
        kind = tail_spec.get("kind", "truncated")
        if kind == "truncated":
            tail = Truncated()
        elif kind == "zero":
            _require("start" in tail_spec, f"tower {name!r}: zero tail needs 'start'")
            tail = ZeroTail(int(tail_spec["start"]))
        elif kind == "eventually-l-adic":
            _require("module" in tail_spec, f"tower {name!r}: tail needs 'module'")
            mname = tail_spec["module"]
            _require(mname in tf.modules, f"tower {name!r}: unknown module {mname!r}")
            tail = EventuallyLAdic(int(tail_spec.get("start", 0)), tf.modules[mname])
        else:
            raise TowerFileError(f"tower {name!r}: unknown tail kind {kind!r}")
        try:
            tf.towers[name] = Tower(l, tuple(groups), tuple(maps), tail=tail)
        except ValueError as exc:
            raise TowerFileError(f"tower {name!r}: {exc}") from exc

    return tf


def load_tower_file(path: str) -> TowerFile:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise TowerFileError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise TowerFileError(f"{path}: invalid JSON at line {exc.lineno} col {exc.colno}") from exc
    return load_tower_data(data)

"""Series spec files: structured text (JSON) with exact numbers as strings.

Schema (all numerals are decimal strings, rationals as "p/q"):

    {
      "name": "...",
      "ambient": {"n": "2", "d": "1"},
      "rule": {"type": "POLYTOPAL", "vertices": [["0", "0"], ["1", "0"]]},
      "stable_lattice": [["1", "0"], ["0", "1"]]        # optional
    }

Rule variants: POLYTOPAL {vertices}, CONGRUENCE {vertices, lattice, offset},
POWERS {points}, TABLE {max_degree, slices}, PIECEWISE {pieces: [{from, to,
rule}]}, PROJECTED {matrix, base: {ambient, rule}}.
"""

from __future__ import annotations

import hashlib
import json
from fractions import Fraction
from pathlib import Path

from .errors import SpecFileError
from .lattice import hermite_basis, point_set
from .polytope import convex_hull
from .series import (
    AmbientSpec,
    CongruenceRule,
    Piece,
    PiecewiseRule,
    PolytopalRule,
    PowersRule,
    ProjectedRule,
    SeriesSpec,
    TableRule,
)


def _want(mapping, key, path):
    if not isinstance(mapping, dict) or key not in mapping:
        raise SpecFileError(f"missing field '{path}.{key}'" if path else f"missing field '{key}'")
    return mapping[key]


def _int(value, path) -> int:
    if isinstance(value, bool) or not isinstance(value, (str, int)):
        raise SpecFileError(f"field '{path}' must be an integer string")
    try:
        return int(value)
    except ValueError:
        raise SpecFileError(f"field '{path}' is not an integer: {value!r}") from None


def _fraction(value, path) -> Fraction:
    if isinstance(value, bool) or not isinstance(value, (str, int)):
        raise SpecFileError(f"field '{path}' must be a number string")
    try:
        return Fraction(str(value))
    except (ValueError, ZeroDivisionError):
        raise SpecFileError(f"field '{path}' is not a rational: {value!r}") from None


def _int_rows(value, path):
    if not isinstance(value, list):
        raise SpecFileError(f"field '{path}' must be a list of rows")
    return [
        [_int(c, f"{path}[{i}][{j}]") for j, c in enumerate(row)]
        for i, row in enumerate(value)
    ]


def _fraction_rows(value, path):
    if not isinstance(value, list):
        raise SpecFileError(f"field '{path}' must be a list of rows")
    return [
        [_fraction(c, f"{path}[{i}][{j}]") for j, c in enumerate(row)]
        for i, row in enumerate(value)
    ]


def _rule_from_jsonable(obj, ambient: AmbientSpec, path: str):
    kind = _want(obj, "type", path)
    if kind == "POLYTOPAL":
        verts = _fraction_rows(_want(obj, "vertices", path), f"{path}.vertices")
        return PolytopalRule(convex_hull(verts))
    if kind == "CONGRUENCE":
        verts = _fraction_rows(_want(obj, "vertices", path), f"{path}.vertices")
        rows = _int_rows(_want(obj, "lattice", path), f"{path}.lattice")
        offset = [_int(c, f"{path}.offset") for c in _want(obj, "offset", path)]
        return CongruenceRule(
            convex_hull(verts),
            hermite_basis(rows, ambient.n),
            tuple(offset),
        )
    if kind == "POWERS":
        pts = _int_rows(_want(obj, "points", path), f"{path}.points")
        return PowersRule(point_set(pts))
    if kind == "TABLE":
        max_degree = _int(_want(obj, "max_degree", path), f"{path}.max_degree")
        slices_obj = _want(obj, "slices", path)
        if not isinstance(slices_obj, dict):
            raise SpecFileError(f"field '{path}.slices' must be an object")
        slices = []
        for key in sorted(slices_obj, key=lambda s: _int(s, f"{path}.slices key")):
            deg = _int(key, f"{path}.slices key")
            pts = _int_rows(slices_obj[key], f"{path}.slices[{key}]")
            slices.append((deg, point_set(pts)))
        return TableRule(max_degree, tuple(slices))
    if kind == "PIECEWISE":
        pieces_obj = _want(obj, "pieces", path)
        pieces = []
        for i, piece in enumerate(pieces_obj):
            low = _int(_want(piece, "from", f"{path}.pieces[{i}]"), f"{path}.pieces[{i}].from")
            high_raw = _want(piece, "to", f"{path}.pieces[{i}]")
            high = None if high_raw is None else _int(high_raw, f"{path}.pieces[{i}].to")
            sub_rule = _rule_from_jsonable(
                _want(piece, "rule", f"{path}.pieces[{i}]"),
                ambient,
                f"{path}.pieces[{i}].rule",
            )
            pieces.append(Piece(low, high, SeriesSpec(ambient, sub_rule)))
        return PiecewiseRule(tuple(pieces))
    if kind == "PROJECTED":
        base_obj = _want(obj, "base", path)
        base_ambient = _ambient_from_jsonable(_want(base_obj, "ambient", f"{path}.base"))
        base_rule = _rule_from_jsonable(
            _want(base_obj, "rule", f"{path}.base"), base_ambient, f"{path}.base.rule"
        )
        matrix = _int_rows(_want(obj, "matrix", path), f"{path}.matrix")
        return ProjectedRule(
            SeriesSpec(base_ambient, base_rule), tuple(tuple(r) for r in matrix)
        )
    raise SpecFileError(f"unknown rule type {kind!r} at '{path}.type'")


def _ambient_from_jsonable(obj) -> AmbientSpec:
    return AmbientSpec(_int(_want(obj, "n", "ambient"), "ambient.n"),
                       _int(_want(obj, "d", "ambient"), "ambient.d"))


def spec_from_jsonable(obj) -> SeriesSpec:
    ambient = _ambient_from_jsonable(_want(obj, "ambient", ""))
    rule = _rule_from_jsonable(_want(obj, "rule", ""), ambient, "rule")
    name = obj.get("name", "")
    stable = obj.get("stable_lattice")
    declared = None
    if stable is not None:
        declared = hermite_basis(_int_rows(stable, "stable_lattice"), ambient.n)
    return SeriesSpec(ambient, rule, name, declared)


def parse_spec_text(text: str) -> SeriesSpec:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecFileError(f"parse error at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return spec_from_jsonable(obj)


def parse_spec(path) -> SeriesSpec:
    """Load and validate a series spec file."""
    p = Path(path)
    if not p.exists():
        raise SpecFileError(f"spec file not found: {p}")
    return parse_spec_text(p.read_text())


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------

def _num(x) -> str:
    return str(x)


def _rows_jsonable(rows):
    return [[_num(c) for c in row] for row in rows]


def _rule_to_jsonable(rule):
    if isinstance(rule, PolytopalRule):
        return {"type": "POLYTOPAL", "vertices": _rows_jsonable(rule.polytope.vertices)}
    if isinstance(rule, CongruenceRule):
        return {
            "type": "CONGRUENCE",
            "vertices": _rows_jsonable(rule.polytope.vertices),
            "lattice": _rows_jsonable(rule.lattice.basis),
            "offset": [_num(c) for c in rule.offset],
        }
    if isinstance(rule, PowersRule):
        return {"type": "POWERS", "points": _rows_jsonable(rule.generators)}
    if isinstance(rule, TableRule):
        return {
            "type": "TABLE",
            "max_degree": _num(rule.max_degree),
            "slices": {
                _num(deg): _rows_jsonable(pts) for deg, pts in rule.slices
            },
        }
    if isinstance(rule, PiecewiseRule):
        return {
            "type": "PIECEWISE",
            "pieces": [
                {
                    "from": _num(piece.low),
                    "to": None if piece.high is None else _num(piece.high),
                    "rule": _rule_to_jsonable(piece.spec.rule),
                }
                for piece in rule.pieces
            ],
        }
    if isinstance(rule, ProjectedRule):
        return {
            "type": "PROJECTED",
            "matrix": _rows_jsonable(rule.matrix),
            "base": {
                "ambient": {"n": _num(rule.base.ambient.n), "d": _num(rule.base.ambient.d)},
                "rule": _rule_to_jsonable(rule.base.rule),
            },
        }
    raise SpecFileError(f"cannot serialize rule {type(rule).__name__}")


def spec_to_jsonable(spec: SeriesSpec) -> dict:
    obj = {
        "name": spec.name,
        "ambient": {"n": _num(spec.ambient.n), "d": _num(spec.ambient.d)},
        "rule": _rule_to_jsonable(spec.rule),
    }
    if spec.declared_lambda_inf is not None:
        obj["stable_lattice"] = _rows_jsonable(spec.declared_lambda_inf.basis)
    return obj


def spec_to_text(spec: SeriesSpec) -> str:
    return json.dumps(spec_to_jsonable(spec), indent=2, sort_keys=True) + "\n"


def write_spec(spec: SeriesSpec, path) -> None:
    Path(path).write_text(spec_to_text(spec))


def spec_digest(spec: SeriesSpec) -> str:
    """Stable hash of the canonical serialized form (cache key material)."""
    canonical = json.dumps(spec_to_jsonable(spec), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()[:24]

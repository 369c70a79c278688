"""JSON encoding of distributions and families.

Rationals are written as strings (``"1/3"``); on input, strings, integers and
JSON decimals are accepted, with decimals read from their literal text.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from ._rational import to_rational
from .dist import ClosedFormDist, DiscreteDist, InvalidDistribution
from .families import BuiltinFamily, FamilyLike, FiniteFamily


class SchemaError(ValueError):
    pass


def loads(text: str):
    """``json.loads`` with decimals parsed exactly as written."""
    return json.loads(text, parse_float=Fraction)


def load_arg(arg: str):
    """Inline JSON, or a path to a JSON file."""
    text = arg.strip()
    if not text.startswith(("{", "[")):
        path = Path(arg)
        if not path.is_file():
            raise SchemaError(f"{arg!r} is neither JSON nor a readable file")
        text = path.read_text()
    try:
        return loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"malformed JSON: {exc}") from None


def rational(v) -> Fraction:
    if isinstance(v, (bool, list, dict)) or v is None:
        raise SchemaError(f"expected a number, got {v!r}")
    try:
        return to_rational(v)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise SchemaError(f"bad number {v!r}: {exc}") from None


def rstr(x: Fraction) -> str:
    return str(x)


def _require(obj, key, kind=None):
    if not isinstance(obj, dict) or key not in obj:
        raise SchemaError(f"missing field {key!r}")
    val = obj[key]
    if kind is not None and not isinstance(val, kind):
        raise SchemaError(f"field {key!r} must be a {kind.__name__}")
    return val


def dist_from_json(obj):
    kind = _require(obj, "type", str)
    if kind == "discrete":
        atoms = _require(obj, "atoms", list)
        pairs = []
        for a in atoms:
            pairs.append((rational(_require(a, "x")), rational(_require(a, "p"))))
        if any(p < 0 for _, p in pairs):
            raise InvalidDistribution("probabilities must be nonnegative")
        return DiscreteDist.from_pairs(pairs)
    if kind == "builtin-dist":
        return ClosedFormDist(_require(obj, "name", str), rational(obj.get("r", 1)))
    raise SchemaError(f"unknown distribution type {kind!r}")


def dist_to_json(X) -> dict:
    if isinstance(X, DiscreteDist):
        return {"type": "discrete", "atoms": [{"x": rstr(x), "p": rstr(p)} for x, p in X.atoms]}
    if isinstance(X, ClosedFormDist):
        return {"type": "builtin-dist", "name": X.catalog_id, "r": rstr(X.r)}
    raise TypeError(f"cannot serialise {type(X).__name__}")


def family_from_json(obj) -> FamilyLike:
    kind = _require(obj, "type", str)
    if kind == "finite":
        members = _require(obj, "members", list)
        out = []
        for m in members:
            X = dist_from_json(m)
            if not isinstance(X, DiscreteDist):
                raise SchemaError("finite families take discrete members only")
            out.append(X)
        return FiniteFamily(tuple(out))
    if kind == "builtin":
        N = obj.get("N", 10_000)
        if isinstance(N, bool) or not isinstance(N, int):
            raise SchemaError("field 'N' must be an integer")
        return BuiltinFamily(_require(obj, "name", str), rational(obj.get("r", 1)), N)
    raise SchemaError(f"unknown family type {kind!r}")


def family_to_json(fam: FamilyLike) -> dict:
    if isinstance(fam, FiniteFamily):
        return {"type": "finite", "members": [dist_to_json(X) for X in fam.members]}
    return {"type": "builtin", "name": fam.name, "r": rstr(fam.r), "N": fam.N}


def dumps(obj) -> str:
    """Canonical JSON: sorted keys, two-space indent, non-ASCII kept."""
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False)

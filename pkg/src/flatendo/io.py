"""JSON reading and writing of groups, maps and reports.

Rationals travel as strings "p/q" (lowest terms, q > 0) or "p" when q = 1;
plain JSON integers are accepted on input.
"""
from __future__ import annotations

import json
from dataclasses import fields, is_dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any

from .affine import AffineMap
from .errors import InputError
from .group import DEFAULT_HOLONOMY_CAP, CrystGroup, GroupElement, build_group
from .linalg import Matrix, frac, vec
from .poly import Poly


def format_rational(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_rational(s) -> Fraction:
    return frac(s)


def format_vector(v) -> list[str]:
    return [format_rational(x) for x in v]


def format_matrix(M: Matrix) -> list[list[str]]:
    return [[format_rational(x) for x in M.row(i)] for i in range(M.rows)]


def parse_matrix(rows) -> Matrix:
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise InputError(f"matrix must be a list of rows, got {rows!r}")
    return Matrix(rows)


def parse_point(text: str) -> tuple:
    """Comma separated rationals, e.g. ``"1/3,1/3,1/3"``."""
    return vec(x for x in text.split(",") if x.strip())


def map_from_json(obj: dict) -> AffineMap:
    if not isinstance(obj, dict) or "translation" not in obj or "linear" not in obj:
        raise InputError("affine map needs 'translation' and 'linear'")
    return AffineMap(vec(obj["translation"]), parse_matrix(obj["linear"]))


def map_to_json(f: AffineMap, name: str | None = None) -> dict:
    out = {}
    if name is not None:
        out["name"] = name
    out["translation"] = format_vector(f.translation)
    out["linear"] = format_matrix(f.linear)
    return out


def group_from_json(obj: dict, holonomy_cap: int = DEFAULT_HOLONOMY_CAP) -> CrystGroup:
    if not isinstance(obj, dict) or "generators" not in obj:
        raise InputError("group file needs a 'generators' list")
    gens = [map_from_json(g) for g in obj["generators"]]
    names = [g.get("name", f"g{i}") for i, g in enumerate(obj["generators"])]
    lattice = parse_matrix(obj["lattice"]) if obj.get("lattice") is not None else None
    n = obj.get("dimension")
    if n is not None:
        for name, g in zip(names, gens):
            if g.dim != n:
                raise InputError(f"generator {name} has dimension {g.dim}, file says {n}")
        if lattice is None and not gens:
            lattice = Matrix.identity(n)
    return build_group(gens, lattice=lattice, names=names, holonomy_cap=holonomy_cap)


def group_to_json(G: CrystGroup, with_holonomy: bool = True) -> dict:
    out: dict[str, Any] = {
        "dimension": G.dim,
        "lattice": format_matrix(G.lattice),
        "generators": [map_to_json(g, name) for name, g in zip(G.generator_names, G.generators)],
    }
    if with_holonomy:
        out["holonomy"] = [
            {"linear": format_matrix(h.linear), "translation": format_vector(h.rep_translation)}
            for h in G.holonomy
        ]
    return out


def load_json(path) -> Any:
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc})") from exc


def load_group(path, holonomy_cap: int = DEFAULT_HOLONOMY_CAP) -> CrystGroup:
    return group_from_json(load_json(path), holonomy_cap=holonomy_cap)


def load_map(path) -> AffineMap:
    return map_from_json(load_json(path))


def load_images(path, G: CrystGroup) -> list[AffineMap]:
    """Generator images for ``realize``: words or explicit maps, one per generator."""
    obj = load_json(path)
    items = obj.get("images") if isinstance(obj, dict) else obj
    if not isinstance(items, list):
        raise InputError("images file needs an 'images' list")
    if len(items) != len(G.generators):
        raise InputError(f"{len(items)} images for {len(G.generators)} generators")
    return [G.word(it) if isinstance(it, str) else map_from_json(it) for it in items]


def to_jsonable(obj) -> Any:
    """Stable JSON shape for report objects: rationals as strings."""
    if isinstance(obj, Fraction):
        return format_rational(obj)
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, float, str)):
        return obj
    if isinstance(obj, Matrix):
        return format_matrix(obj)
    if isinstance(obj, Poly):
        return [format_rational(c) for c in obj.coeffs]
    if isinstance(obj, AffineMap):
        return map_to_json(obj)
    if isinstance(obj, GroupElement):
        return {"lattice_part": list(obj.lattice_part), "holonomy_index": obj.holonomy_index}
    if isinstance(obj, CrystGroup):
        return group_to_json(obj)
    if is_dataclass(obj):
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in fields(obj) if not f.name.startswith("_")}
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(x) for x in obj]
    if isinstance(obj, Path):
        return str(obj)
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps(obj) -> str:
    return json.dumps(to_jsonable(obj), indent=2, sort_keys=False)
